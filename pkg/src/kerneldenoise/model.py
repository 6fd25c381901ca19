"""Semiparametric patch model: Gaussian-kernel expansion plus an edge-ridge
basis and a bilinear polynomial part.

The function class fitted to every patch is

    f(x, y) = sum_q alpha_q k(p_q, (x, y)) + sum_k beta_k psi_k(x, y)
              + h0 + h1 x + h2 y + h3 x y

with kernel centers p_q on the normalized patch grid, psi_k smooth oriented
step functions erf(a x + b y + c), and the flat coefficient order fixed as
(alpha row-major, beta in basis order, h0..h3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import KernelParams, build_gram, erf, quad_form

# Ridge orientations: horizontal, diagonal, vertical, anti-diagonal unit
# normals. Axis-aligned entries are exact so grid symmetry is preserved.
_HALF_SQRT2 = math.sqrt(0.5)
RIDGE_DIRECTIONS = (
    (1.0, 0.0),
    (_HALF_SQRT2, _HALF_SQRT2),
    (0.0, 1.0),
    (-_HALF_SQRT2, _HALF_SQRT2),
)


@dataclass(frozen=True)
class RidgeFunction:
    """Oriented smooth step psi(x, y) = erf(a x + b y + c)."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        if not all(map(math.isfinite, (self.a, self.b, self.c))):
            raise ValueError("ridge parameters must be finite")
        if self.a == 0.0 and self.b == 0.0:
            raise ValueError("degenerate ridge: (a, b) must not be (0, 0)")


@dataclass(frozen=True)
class EdgeBasis:
    """Ordered family of ridge functions; beta indices are positional."""

    ridges: tuple[RidgeFunction, ...]

    @property
    def k(self) -> int:
        return len(self.ridges)


def ridge_eval(r: RidgeFunction, x, y):
    """Evaluate erf(a x + b y + c); scalar or elementwise over arrays."""
    return erf(r.a * np.asarray(x, dtype=float) + r.b * np.asarray(y, dtype=float) + r.c)


def default_basis(levels: int, sharpness: float) -> EdgeBasis:
    """Deterministic ridge family: 4 orientations x `levels` offsets.

    For each orientation with unit normal (ct, st) the offsets are placed at
    the fractions j/(levels+1), j=1..levels, of the projection range of the
    unit square onto that normal, so every ridge line crosses [0,1]^2. The
    transition sharpness is the erf argument scale.
    """
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    if not sharpness > 0:
        raise ValueError(f"sharpness must be positive, got {sharpness}")
    corners = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    ridges = []
    for ct, st in RIDGE_DIRECTIONS:
        proj = corners @ np.array([ct, st])
        lo, hi = float(proj.min()), float(proj.max())
        for j in range(1, levels + 1):
            t_off = lo + (hi - lo) * j / (levels + 1)
            ridges.append(RidgeFunction(sharpness * ct, sharpness * st, -sharpness * t_off))
    return EdgeBasis(tuple(ridges))


def patch_grid(n: int) -> np.ndarray:
    """Row-major (x, y) sample points {(j/(n-1), i/(n-1))} of an n x n patch.

    x runs along columns, y along rows. For n = 1 the single point is (0, 0).
    """
    if n < 1:
        raise ValueError(f"patch side must be >= 1, got {n}")
    coords = np.zeros(1) if n == 1 else np.arange(n) / (n - 1)
    x, y = np.meshgrid(coords, coords)  # y varies along rows
    return np.column_stack([x.ravel(), y.ravel()])


@dataclass
class SemiParametricModel:
    """Fitted coefficients for one patch, with the geometry that scopes them.

    Treated as immutable after construction; safe to share across threads.
    """

    alpha: np.ndarray
    beta: np.ndarray
    h: np.ndarray
    kernel: KernelParams
    grid: np.ndarray
    basis: EdgeBasis = field(default_factory=lambda: EdgeBasis(()))

    def __post_init__(self) -> None:
        self.alpha = np.asarray(self.alpha, dtype=float)
        self.beta = np.asarray(self.beta, dtype=float)
        self.h = np.asarray(self.h, dtype=float)
        self.grid = np.asarray(self.grid, dtype=float)
        n2 = self.grid.shape[0]
        if self.alpha.shape != (n2,):
            raise ValueError(f"alpha must have length {n2}, got {self.alpha.shape}")
        if self.beta.shape != (self.basis.k,):
            raise ValueError(f"beta must have length {self.basis.k}, got {self.beta.shape}")
        if self.h.shape != (4,):
            raise ValueError(f"h must have length 4, got {self.h.shape}")
        n = math.isqrt(n2)
        if n * n != n2:
            raise ValueError(f"grid size {n2} is not a perfect square")

    @property
    def n(self) -> int:
        return math.isqrt(self.grid.shape[0])

    @property
    def coeffs(self) -> np.ndarray:
        """Flat coefficient vector (alpha, beta, h)."""
        return np.concatenate([self.alpha, self.beta, self.h])


def model_eval(m: SemiParametricModel, x: float, y: float) -> float:
    """Evaluate the model at one point; exactly linear in (alpha, beta, h)."""
    p = np.array([float(x), float(y)])
    d = m.grid - p
    inv = 1.0 / (2.0 * m.kernel.sigma * m.kernel.sigma)
    kvec = np.exp(-(d * d).sum(axis=1) * inv)
    val = float(m.alpha @ kvec)
    for bk, r in zip(m.beta, m.basis.ridges):
        val += bk * erf(r.a * p[0] + r.b * p[1] + r.c)
    h = m.h
    return val + h[0] + h[1] * p[0] + h[2] * p[1] + h[3] * p[0] * p[1]


def basis_columns(basis: EdgeBasis, grid: np.ndarray) -> np.ndarray:
    """Evaluate every ridge plus {1, x, y, xy} at the grid points.

    Returns an (len(grid), basis.k + 4) array; these are the non-kernel
    columns of the design matrix.
    """
    x, y = grid[:, 0], grid[:, 1]
    cols = [ridge_eval(r, x, y) for r in basis.ridges]
    cols += [np.ones_like(x), x, y, x * y]
    return np.column_stack(cols)


def build_design(n: int, kernel: KernelParams, basis: EdgeBasis) -> np.ndarray:
    """Design matrix for an n x n patch: row i holds every basis function at
    grid point p_i, so model values on the grid are design @ coeffs.

    Column layout matches the flat coefficient order: the n^2 kernel columns
    (this block is exactly the Gram matrix of the grid), then the ridges,
    then 1, x, y, xy.
    """
    grid = patch_grid(n)
    return np.hstack([build_gram(grid, kernel), basis_columns(basis, grid)])


def design_matrix(m: SemiParametricModel) -> np.ndarray:
    """Design matrix for a model's geometry (grid, kernel, basis)."""
    return build_design(m.n, m.kernel, m.basis)


def rkhs_norm_sq(m: SemiParametricModel, gram: np.ndarray) -> float:
    """Squared RKHS norm of the kernel part, alpha^T G alpha.

    Depends only on alpha; beta and h live outside the kernel space.
    """
    return quad_form(gram, m.alpha)


def model_to_text(m: SemiParametricModel) -> str:
    """Flat debug serialization: header "n k sigma", then the coefficients
    in fixed order. For test fixtures only; the basis itself is not stored.
    """
    header = f"{m.n} {m.basis.k} {m.kernel.sigma!r}"
    body = " ".join(repr(float(v)) for v in m.coeffs)
    return f"{header}\n{body}\n"


def model_from_text(text: str, basis: EdgeBasis) -> SemiParametricModel:
    """Rebuild a model from `model_to_text` output plus the matching basis."""
    lines = text.split("\n")
    n, k, sigma = lines[0].split()
    n, k = int(n), int(k)
    if k != basis.k:
        raise ValueError(f"text declares {k} ridges but basis has {basis.k}")
    vals = np.array([float(v) for v in lines[1].split()])
    n2 = n * n
    if vals.shape[0] != n2 + k + 4:
        raise ValueError(f"expected {n2 + k + 4} coefficients, got {vals.shape[0]}")
    return SemiParametricModel(
        alpha=vals[:n2],
        beta=vals[n2 : n2 + k],
        h=vals[n2 + k :],
        kernel=KernelParams(float(sigma)),
        grid=patch_grid(n),
        basis=basis,
    )
