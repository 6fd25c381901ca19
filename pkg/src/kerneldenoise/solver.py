"""L1-regularized risk for one patch and its projected-subgradient solver.

The objective over the flat coefficient vector c = (alpha, beta, h) is

    sum_i |(D c)_i - y_i| + lam/2 a^T G a + mu/2 sum_k beta_k^2
                          + mu1/2 (h1^2 + h2^2 + h3^2)

with D the patch design matrix, G the grid Gram matrix and y the noisy
samples. h0 is deliberately unpenalized so a constant patch is exactly
representable at zero cost. The objective is convex and piecewise smooth;
minimization uses Polyak's projected subgradient method with a diminishing
step and an L2-ball projection.

Two interchangeable backends run the iteration: a Cython extension
(`_solver_core`, the default when built) and a pure-NumPy twin
(`_solver_py`). Both are deterministic given identical inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _solver_py
from .model import EdgeBasis, SemiParametricModel, build_design, patch_grid
from .numerics import KernelParams, build_gram

try:
    from . import _solver_core

    _HAVE_CORE = True
except ImportError:
    _solver_core = None
    _HAVE_CORE = False

TOL_WINDOW = _solver_py.TOL_WINDOW

DEFAULT_BACKEND = "cython" if _HAVE_CORE else "python"


def available_backends() -> tuple[str, ...]:
    """Backends usable in this installation, default first."""
    return ("cython", "python") if _HAVE_CORE else ("python",)


def _backend_fn(backend: str | None):
    name = DEFAULT_BACKEND if backend is None else backend
    if name == "python":
        return _solver_py.run_minimize
    if name == "cython":
        if not _HAVE_CORE:
            raise RuntimeError("cython backend requested but _solver_core is not built")
        return _solver_core.run_minimize
    raise ValueError(f"unknown backend {name!r}")


@dataclass
class SolverParams:
    """Weights and schedule for one patch solve.

    radius=None means the default projection ball 10 * n * 255, resolved
    once the patch size is known.
    """

    lam: float
    mu: float
    mu1: float
    max_iters: int = 300
    step_c: float = 25.0
    radius: float | None = None
    tol: float = 1e-4

    def __post_init__(self) -> None:
        if self.lam < 0 or self.mu < 0 or self.mu1 < 0:
            raise ValueError("penalty weights must be nonnegative")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.step_c > 0:
            raise ValueError(f"step_c must be positive, got {self.step_c}")
        if self.radius is not None and not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.tol < 0:
            raise ValueError(f"tol must be nonnegative, got {self.tol}")

    def resolve_radius(self, n: int) -> float:
        return 10.0 * n * 255.0 if self.radius is None else self.radius


@dataclass
class PatchSamples:
    """n x n noisy samples on the normalized patch grid, intensities 0..255."""

    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise ValueError(f"patch must be square, got shape {self.values.shape}")
        n = self.values.shape[0]
        if n != 1 and n % 2 == 0:
            raise ValueError(f"patch side must be odd (or 1), got {n}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("patch values must be finite")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def flat(self) -> np.ndarray:
        return self.values.ravel()


def _split_dims(design: np.ndarray, gram: np.ndarray) -> tuple[int, int]:
    n2 = gram.shape[0]
    kk = design.shape[1] - n2 - 4
    if kk < 0 or design.shape[0] != n2:
        raise ValueError(
            f"design shape {design.shape} inconsistent with Gram order {n2}"
        )
    return n2, kk


def _check_coeffs(coeffs, design: np.ndarray) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (design.shape[1],):
        raise ValueError(
            f"coefficient vector length {c.shape} does not match design columns "
            f"{design.shape[1]}"
        )
    return c


def objective(
    coeffs,
    patch: PatchSamples,
    design: np.ndarray,
    gram: np.ndarray,
    p: SolverParams,
) -> float:
    """Full risk value at a coefficient vector."""
    c = _check_coeffs(coeffs, design)
    n2, kk = _split_dims(design, gram)
    if patch.flat.shape[0] != n2:
        raise ValueError(f"patch size {patch.flat.shape[0]} does not match grid {n2}")
    r = design @ c - patch.flat
    alpha, beta, h = c[:n2], c[n2 : n2 + kk], c[n2 + kk :]
    return (
        float(np.abs(r).sum())
        + 0.5 * p.lam * float(alpha @ gram @ alpha)
        + 0.5 * p.mu * float(beta @ beta)
        + 0.5 * p.mu1 * float(h[1:] @ h[1:])
    )


def subgradient(
    coeffs,
    patch: PatchSamples,
    design: np.ndarray,
    gram: np.ndarray,
    p: SolverParams,
) -> np.ndarray:
    """A subgradient of `objective` at `coeffs`, with sign(0) taken as 0.

    That choice is the minimal-norm element of the subdifferential, so a
    zero return certifies optimality of this convex objective.
    """
    c = _check_coeffs(coeffs, design)
    n2, kk = _split_dims(design, gram)
    if patch.flat.shape[0] != n2:
        raise ValueError(f"patch size {patch.flat.shape[0]} does not match grid {n2}")
    r = design @ c - patch.flat
    g = design.T @ np.sign(r)
    g[:n2] += p.lam * (gram @ c[:n2])
    g[n2 : n2 + kk] += p.mu * c[n2 : n2 + kk]
    g[n2 + kk + 1 :] += p.mu1 * c[n2 + kk + 1 :]
    return g


def default_init(patch: PatchSamples, n_coeffs: int, n2: int) -> np.ndarray:
    """Warm start: zero alpha/beta, h0 = patch median (the L1-optimal constant)."""
    c0 = np.zeros(n_coeffs)
    c0[n2 + (n_coeffs - n2 - 4)] = float(np.median(patch.values))
    return c0


@dataclass
class SolveResult:
    """Best iterate of one patch solve."""

    model: SemiParametricModel
    objective: float
    coeffs: np.ndarray
    iterations: int
    objective_history: np.ndarray | None = None
    norm_history: np.ndarray | None = None


def minimize_risk(
    design: np.ndarray,
    gram: np.ndarray,
    y: np.ndarray,
    p: SolverParams,
    init: np.ndarray,
    radius: float,
    backend: str | None = None,
    collect_history: bool = False,
):
    """Run the subgradient loop on prebuilt matrices.

    Low-level entry shared by `solve_patch` and the image engine; returns
    (best_c, best_obj, iterations, obj_history, norm_history).
    """
    fn = _backend_fn(backend)
    return fn(
        np.ascontiguousarray(design, dtype=float),
        np.ascontiguousarray(gram, dtype=float),
        np.ascontiguousarray(y, dtype=float),
        p.lam,
        p.mu,
        p.mu1,
        p.max_iters,
        p.step_c,
        radius,
        p.tol,
        np.ascontiguousarray(init, dtype=float),
        collect_history,
    )


def solve_patch(
    patch: PatchSamples,
    basis: EdgeBasis,
    kernel: KernelParams,
    p: SolverParams,
    init=None,
    backend: str | None = None,
    collect_history: bool = False,
) -> SolveResult:
    """Fit the semiparametric model to one noisy patch.

    Deterministic given identical inputs; the returned model carries the
    best-objective iterate seen, which is never worse than the init.
    """
    n = patch.n
    n2 = n * n
    design = build_design(n, kernel, basis)
    gram = design[:, :n2]
    if init is None:
        c0 = default_init(patch, design.shape[1], n2)
    else:
        c0 = _check_coeffs(init, design)
    best_c, best_obj, iters, obj_hist, norm_hist = minimize_risk(
        design,
        gram,
        patch.flat,
        p,
        c0,
        p.resolve_radius(n),
        backend=backend,
        collect_history=collect_history,
    )
    model = SemiParametricModel(
        alpha=best_c[:n2],
        beta=best_c[n2 : n2 + basis.k],
        h=best_c[n2 + basis.k :],
        kernel=kernel,
        grid=patch_grid(n),
        basis=basis,
    )
    return SolveResult(model, best_obj, best_c, iters, obj_hist, norm_hist)
