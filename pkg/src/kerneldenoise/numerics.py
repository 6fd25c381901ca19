"""Scalar special functions and kernel linear algebra.

Everything in this module is a pure function of its inputs, so results are
reproducible run-to-run and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Rational approximation of erf (Abramowitz & Stegun 7.1.26), implemented
# in-repo so outputs do not depend on platform libm. Max abs error 1.5e-7.
_ERF_P = 0.3275911
_ERF_A1 = 0.254829592
_ERF_A2 = -0.284496736
_ERF_A3 = 1.421413741
_ERF_A4 = -1.453152027
_ERF_A5 = 1.061405429

# Largest double below 1; erf output is clamped here so its range stays
# inside the open interval (-1, 1) even where exp(-x^2) underflows.
_ONE_MINUS = 1.0 - 2.0 ** -53


@dataclass(frozen=True)
class KernelParams:
    """Gaussian kernel width, in normalized patch coordinates."""

    sigma: float

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


def erf(x):
    """Error function (2/sqrt(pi)) * int_0^x exp(-t^2) dt.

    Accepts a float or ndarray. Absolute error <= 1.5e-7 everywhere; exactly
    odd by construction, exactly 0 at 0, and strictly inside (-1, 1).
    """
    arr = np.asarray(x, dtype=float)
    sign = np.where(arr < 0.0, -1.0, 1.0)
    ax = np.abs(arr)
    t = 1.0 / (1.0 + _ERF_P * ax)
    poly = t * (_ERF_A1 + t * (_ERF_A2 + t * (_ERF_A3 + t * (_ERF_A4 + t * _ERF_A5))))
    y = 1.0 - poly * np.exp(-ax * ax)
    # The rational formula gives ~1e-9 at 0; pin the origin exactly.
    y = sign * np.minimum(y, _ONE_MINUS)
    y = np.where(ax == 0.0, 0.0, y)
    if np.ndim(x) == 0:
        return float(y)
    return y


def gaussian_kernel(p, q, params: KernelParams) -> float:
    """Gaussian kernel exp(-||p - q||^2 / (2 sigma^2)) between two plane points."""
    d = np.asarray(p, dtype=float) - np.asarray(q, dtype=float)
    return float(np.exp(-float(d @ d) / (2.0 * params.sigma * params.sigma)))


def build_gram(grid, params: KernelParams) -> np.ndarray:
    """Gram matrix of kernel sections over `grid` (an (n, 2) array of points).

    The result is symmetric by construction (upper triangle mirrored) with an
    exact unit diagonal, and positive semidefinite up to roundoff.
    """
    pts = np.atleast_2d(np.asarray(grid, dtype=float))
    if pts.size == 0:
        raise ValueError("grid must contain at least one point")
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"grid must have shape (n, 2), got {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("grid points must be finite")
    n = pts.shape[0]
    inv = 1.0 / (2.0 * params.sigma * params.sigma)
    g = np.ones((n, n))
    for i in range(n - 1):
        d = pts[i + 1 :] - pts[i]
        row = np.exp(-(d * d).sum(axis=1) * inv)
        g[i, i + 1 :] = row
        g[i + 1 :, i] = row
    return g


def quad_form(gram: np.ndarray, a) -> float:
    """Quadratic form a^T G a; the squared RKHS norm of sum_i a_i k(p_i, .)."""
    vec = np.asarray(a, dtype=float)
    if vec.ndim != 1 or vec.shape[0] != gram.shape[0]:
        raise ValueError(
            f"coefficient length {vec.shape} does not match Gram order {gram.shape[0]}"
        )
    return float(vec @ gram @ vec)
