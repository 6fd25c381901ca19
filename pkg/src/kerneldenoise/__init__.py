"""Edge-preserving image denoising by per-pixel robust kernel regression.

Each pixel's neighborhood is fitted with a Gaussian-kernel expansion plus
oriented error-function ridges (for sharp steps) and a bilinear trend,
under an L1 data term minimized by a projected subgradient method. The
hot solver loop has a compiled core with a pure-Python fallback; see
``available_backends()`` for what this installation is running.
"""

from .bench import BenchRow, CSV_HEADER, GAUSSIAN_S_GRID, IMPULSE_P_GRID, noisy_psnr_grid, rows_to_csv, run_suite, suite_specs
from .config import ConfigError, build_config, config_digest, load_config, parse_config
from .engine import (
    EngineConfig,
    Region,
    build_workspace,
    classify_region,
    denoise_image,
    denoise_pixel,
    extract_patch,
    mean_gradient,
    pad_reflect,
    params_for_region,
)
from .metrics import PSNR_TEXT_CAP, format_psnr, mse, psnr
from .model import (
    EdgeBasis,
    RidgeFunction,
    SemiParametricModel,
    basis_columns,
    build_design,
    default_basis,
    design_matrix,
    model_eval,
    model_from_text,
    model_to_text,
    patch_grid,
    rkhs_norm_sq,
    ridge_eval,
)
from .noise import (
    NoiseSpec,
    Xorshift64Star,
    add_gaussian_noise,
    add_impulse_noise,
    add_mixed_noise,
)
from .numerics import KernelParams, build_gram, erf, gaussian_kernel, quad_form
from .pgm import (
    PgmError,
    PgmParseError,
    PgmUnsupportedError,
    load_pgm,
    read_pgm,
    save_pgm,
    write_pgm,
)
from .solver import (
    DEFAULT_BACKEND,
    PatchSamples,
    SolveResult,
    SolverParams,
    available_backends,
    default_init,
    minimize_risk,
    objective,
    solve_patch,
    subgradient,
)

__version__ = "1.0.0"

__all__ = [name for name in dir() if not name.startswith("_")]
