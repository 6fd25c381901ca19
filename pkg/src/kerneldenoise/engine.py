"""Whole-image denoising: sliding patches, edge/smooth classification, and
one robust model fit per pixel.

For every pixel the surrounding patch is extracted (mirror reflection at
borders), classified by its mean gradient, and fitted with
region-dependent penalty weights; the denoised value is the fitted model
evaluated at the patch center. Patch geometry never changes, so the Gram
and design matrices are built once and shared read-only by all pixels,
which makes the per-pixel work pure and freely parallelizable.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .model import EdgeBasis, default_basis, patch_grid
from .numerics import KernelParams
from .solver import SolverParams, default_init, minimize_risk
from . import model as _model


class Region(Enum):
    SMOOTH = "smooth"
    EDGE = "edge"


@dataclass
class EngineConfig:
    """Denoiser configuration; defaults are the shipped operating point.

    Edge regions get the small (mu_edge, mu1_edge) pair so the ridge basis
    is free to model steps; smooth regions get the large pair so it is
    suppressed. lam is shared by both regions.
    """

    patch_n: int = 7
    sigma: float = 0.35
    lam: float = 0.5
    mu_smooth: float = 10.0
    mu_edge: float = 0.05
    mu1_smooth: float = 5.0
    mu1_edge: float = 0.05
    edge_threshold: float = 25.0
    basis_levels: int = 3
    basis_sharpness: float = 15.0
    max_iters: int = 300
    step_c: float = 25.0
    radius: float | None = None
    tol: float = 1e-4

    def __post_init__(self) -> None:
        if self.patch_n % 2 == 0 or not 3 <= self.patch_n <= 13:
            raise ValueError(f"patch_n must be odd and in 3..13, got {self.patch_n}")
        for name in ("lam", "mu_smooth", "mu_edge", "mu1_smooth", "mu1_edge"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.mu_edge > self.mu_smooth:
            raise ValueError("mu_edge must not exceed mu_smooth")
        if self.mu1_edge > self.mu1_smooth:
            raise ValueError("mu1_edge must not exceed mu1_smooth")
        if self.edge_threshold < 0:
            raise ValueError("edge_threshold must be nonnegative")
        if self.basis_levels < 1:
            raise ValueError("basis_levels must be >= 1")
        if not self.basis_sharpness > 0:
            raise ValueError("basis_sharpness must be positive")
        # Schedule fields are validated by SolverParams.
        self.solver_params(Region.SMOOTH)

    def solver_params(self, region: Region) -> SolverParams:
        edge = region is Region.EDGE
        return SolverParams(
            lam=self.lam,
            mu=self.mu_edge if edge else self.mu_smooth,
            mu1=self.mu1_edge if edge else self.mu1_smooth,
            max_iters=self.max_iters,
            step_c=self.step_c,
            radius=self.radius,
            tol=self.tol,
        )


def params_for_region(region: Region, cfg: EngineConfig) -> SolverParams:
    """Penalty weights for a classified region; lam is region-independent."""
    return cfg.solver_params(region)


def reflect_index(idx: int, size: int) -> int:
    """Mirror an out-of-range index back into 0..size-1 (no edge repeat)."""
    if size == 1:
        return 0
    period = 2 * (size - 1)
    idx %= period
    return period - idx if idx >= size else idx


def _reflected_range(start: int, count: int, size: int) -> np.ndarray:
    return np.array([reflect_index(q, size) for q in range(start, start + count)])


def pad_reflect(img: np.ndarray, pad: int) -> np.ndarray:
    """Mirror-pad an image by `pad` pixels on every side."""
    rows = _reflected_range(-pad, img.shape[0] + 2 * pad, img.shape[0])
    cols = _reflected_range(-pad, img.shape[1] + 2 * pad, img.shape[1])
    return img[np.ix_(rows, cols)]


def check_image(img) -> np.ndarray:
    """Validate a 2D intensity image with values in [0, 255]."""
    arr = np.asarray(img, dtype=float)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"image must be a nonempty 2D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image values must be finite")
    if arr.min() < 0 or arr.max() > 255:
        raise ValueError("image values must lie in [0, 255]")
    return arr


def extract_patch(img: np.ndarray, i: int, j: int, n: int) -> np.ndarray:
    """The n x n window centered at pixel (i, j), mirror-reflected at borders."""
    img = np.asarray(img, dtype=float)
    h, w = img.shape
    if not (0 <= i < h and 0 <= j < w):
        raise ValueError(f"pixel ({i}, {j}) outside image of shape {img.shape}")
    half = n // 2
    rows = _reflected_range(i - half, n, h)
    cols = _reflected_range(j - half, n, w)
    return img[np.ix_(rows, cols)]


def mean_gradient(values: np.ndarray) -> float:
    """Mean central-difference gradient magnitude over interior samples.

    Differences are taken on the raw intensities in per-pixel units; a
    constant patch gives exactly 0.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 2 or min(v.shape) < 2:
        raise ValueError(f"need at least a 2x2 patch, got shape {v.shape}")
    if min(v.shape) < 3:
        return 0.0  # no interior samples
    gx = 0.5 * (v[1:-1, 2:] - v[1:-1, :-2])
    gy = 0.5 * (v[2:, 1:-1] - v[:-2, 1:-1])
    return float(np.mean(np.sqrt(gx * gx + gy * gy)))


def classify_region(g: float, cfg: EngineConfig) -> Region:
    """Edge iff the mean gradient reaches the threshold (ties are Edge)."""
    if g < 0:
        raise ValueError(f"mean gradient must be nonnegative, got {g}")
    return Region.EDGE if g >= cfg.edge_threshold else Region.SMOOTH


@dataclass
class EngineWorkspace:
    """Geometry shared by every pixel: immutable once built."""

    cfg: EngineConfig
    kernel: KernelParams
    basis: EdgeBasis
    design: np.ndarray
    gram: np.ndarray
    center_row: int
    radius: float
    params_smooth: SolverParams
    params_edge: SolverParams


def build_workspace(cfg: EngineConfig) -> EngineWorkspace:
    """Precompute the patch-position-independent matrices for a config."""
    kernel = KernelParams(cfg.sigma)
    basis = default_basis(cfg.basis_levels, cfg.basis_sharpness)
    n = cfg.patch_n
    design = np.ascontiguousarray(_model.build_design(n, kernel, basis))
    gram = np.ascontiguousarray(design[:, : n * n])
    smooth = cfg.solver_params(Region.SMOOTH)
    return EngineWorkspace(
        cfg=cfg,
        kernel=kernel,
        basis=basis,
        design=design,
        gram=gram,
        center_row=(n * n - 1) // 2,
        radius=smooth.resolve_radius(n),
        params_smooth=smooth,
        params_edge=cfg.solver_params(Region.EDGE),
    )


def _fit_patch_value(patch: np.ndarray, ws: EngineWorkspace, backend: str | None) -> float:
    g = mean_gradient(patch)
    params = ws.params_edge if g >= ws.cfg.edge_threshold else ws.params_smooth
    y = np.ascontiguousarray(patch.ravel())
    c0 = np.zeros(ws.design.shape[1])
    c0[ws.gram.shape[0] + ws.basis.k] = float(np.median(y))  # h0 = patch median
    best_c, _, _, _, _ = minimize_risk(
        ws.design, ws.gram, y, params, c0, ws.radius, backend=backend
    )
    val = float(ws.design[ws.center_row] @ best_c)
    return min(max(val, 0.0), 255.0)


def denoise_pixel(
    img: np.ndarray,
    i: int,
    j: int,
    cfg: EngineConfig,
    ws: EngineWorkspace | None = None,
    backend: str | None = None,
) -> float:
    """Denoised value of one pixel: fit its patch, evaluate at the center."""
    if ws is None:
        ws = build_workspace(cfg)
    patch = extract_patch(img, i, j, cfg.patch_n)
    return _fit_patch_value(patch, ws, backend)


def denoise_image(
    img,
    cfg: EngineConfig | None = None,
    threads: int | None = None,
    progress=None,
    backend: str | None = None,
) -> np.ndarray:
    """Denoise a whole image; output has identical shape, values in [0, 255].

    Pixels are independent pure solves over shared immutable matrices, so
    the result is bit-identical for any thread count. `progress`, if given,
    is called as progress(pixels_done, pixels_total) from worker threads.
    """
    img = check_image(img)
    if cfg is None:
        cfg = EngineConfig()
    ws = build_workspace(cfg)
    h, w = img.shape
    n = cfg.patch_n
    padded = pad_reflect(img, n // 2)
    out = np.empty_like(img)
    total = h * w
    done = 0
    lock = threading.Lock()

    def run_row(i: int) -> None:
        nonlocal done
        for j in range(w):
            patch = padded[i : i + n, j : j + n]
            out[i, j] = _fit_patch_value(patch, ws, backend)
        if progress is not None:
            with lock:
                done += w
                progress(done, total)

    workers = threads if threads is not None else (os.cpu_count() or 1)
    if workers <= 1 or h == 1:
        for i in range(h):
            run_row(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_row, range(h)))
    return out


def with_overrides(cfg: EngineConfig, **fields) -> EngineConfig:
    """Copy a config with some fields replaced (revalidates invariants)."""
    return replace(cfg, **fields)
