"""Independent reference implementations used to derive expected values.

Everything here is deliberately naive — quadrature instead of closed
forms, double loops instead of linear algebra, exhaustive search instead
of optimization — so a shared bug with the library is implausible.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


def _simpson(f, a: float, b: float) -> float:
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))


def _adaptive(f, a: float, b: float, whole: float, tol: float, depth: int) -> float:
    mid = 0.5 * (a + b)
    left = _simpson(f, a, mid)
    right = _simpson(f, mid, b)
    if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    return _adaptive(f, a, mid, left, 0.5 * tol, depth - 1) + _adaptive(
        f, mid, b, right, 0.5 * tol, depth - 1
    )


def erf_quadrature(x: float, tol: float = 1e-10) -> float:
    """(2/sqrt(pi)) * integral of exp(-t^2) from 0 to x, adaptive Simpson."""
    if x == 0.0:
        return 0.0
    if x < 0.0:
        return -erf_quadrature(-x, tol)
    f = lambda t: math.exp(-t * t)
    return _TWO_OVER_SQRT_PI * _adaptive(f, 0.0, x, _simpson(f, 0.0, x), tol, 48)


def naive_kernel(p, q, sigma: float) -> float:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return math.exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma))


def naive_model_eval(alpha, beta, h, grid, ridges, sigma: float, x: float, y: float, erf_fn) -> float:
    """Term-by-term expansion sum; erf_fn supplies the ridge nonlinearity."""
    total = 0.0
    for a_i, p in zip(alpha, grid):
        total += a_i * naive_kernel(p, (x, y), sigma)
    for b_k, (ra, rb, rc) in zip(beta, ridges):
        total += b_k * erf_fn(ra * x + rb * y + rc)
    h0, h1, h2, h3 = h
    return total + h0 + h1 * x + h2 * y + h3 * x * y


def naive_objective(coeffs, values, design, gram, lam, mu, mu1) -> float:
    """Plain-Python rebuild of the risk functional from its definition."""
    design = np.asarray(design)
    rows, ncoef = design.shape
    n2 = np.asarray(gram).shape[0]
    kk = ncoef - n2 - 4
    flat = np.asarray(values).ravel()
    total = 0.0
    for i in range(rows):
        pred = 0.0
        for j in range(ncoef):
            pred += design[i][j] * coeffs[j]
        total += abs(pred - flat[i])
    total += 0.5 * lam * quad_double_loop(gram, coeffs[:n2])
    for k in range(n2, n2 + kk):
        total += 0.5 * mu * coeffs[k] ** 2
    for l in range(n2 + kk + 1, ncoef):
        total += 0.5 * mu1 * coeffs[l] ** 2
    return total


def quad_double_loop(G, a) -> float:
    G = np.asarray(G)
    a = np.asarray(a)
    total = 0.0
    for i in range(len(a)):
        for j in range(len(a)):
            total += a[i] * a[j] * G[i][j]
    return float(total)


def lattice_search_l1(design, y, axes, chunk: int = 200_000):
    """Exhaustive L1 data-term minimization over a coordinate lattice.

    axes[j] lists the candidate values for coefficient j; every combination
    is scored. Returns (best_value, best_coeffs).
    """
    design = np.asarray(design, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    best = math.inf
    best_c = None
    combos = itertools.product(*axes)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            break
        cmat = np.array(block)
        scores = np.abs(design @ cmat.T - y[:, None]).sum(axis=0)
        k = int(np.argmin(scores))
        if scores[k] < best:
            best = float(scores[k])
            best_c = cmat[k]
    return best, best_c


def naive_mean_gradient(patch) -> float:
    """Interior central differences with explicit index arithmetic."""
    v = np.asarray(patch, dtype=float)
    rows, cols = v.shape
    total = 0.0
    count = 0
    for i in range(1, rows - 1):
        for j in range(1, cols - 1):
            gx = (v[i][j + 1] - v[i][j - 1]) / 2.0
            gy = (v[i + 1][j] - v[i - 1][j]) / 2.0
            total += math.sqrt(gx * gx + gy * gy)
            count += 1
    return total / count if count else 0.0
