"""Fidelity metrics: mean squared error and peak signal-to-noise ratio."""

from __future__ import annotations

import math

import numpy as np

PEAK = 255.0
PSNR_TEXT_CAP = 99.0


def mse(a, b) -> float:
    """Mean squared pixel difference between two equal-shape images."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValueError("images must be nonempty")
    d = a - b
    return float(np.mean(d * d))


def psnr(a, b) -> float:
    """10*log10(255^2 / MSE) in dB; identical images give math.inf."""
    e = mse(a, b)
    if e == 0.0:
        return math.inf
    return 10.0 * math.log10(PEAK * PEAK / e)


def format_psnr(value: float) -> str:
    """Two-decimal text form with the infinity sentinel capped at 99.00."""
    return "%.2f" % min(value, PSNR_TEXT_CAP)
