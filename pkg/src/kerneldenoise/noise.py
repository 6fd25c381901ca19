"""Deterministic noise injection for benchmark reproduction.

The PRNG is pinned to xorshift64* and the variate recipes (Box-Muller
pairs, salt-and-pepper draws) consume the stream in a fixed documented
order, so a (image, parameters, seed) triple produces bit-identical noisy
images on every platform and in every implementation of this contract.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1
_MULT = 2685821657736338717
_SEED0_REMAP = 0x9E3779B97F4A7C15
_INV_2_53 = 2.0 ** -53


class Xorshift64Star:
    """xorshift64* stream; seed 0 is remapped so the state is never stuck."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        seed = int(seed) & _MASK64
        self.state = seed if seed != 0 else _SEED0_REMAP

    def next_u64(self) -> int:
        s = self.state
        s ^= (s >> 12)
        s ^= (s << 25) & _MASK64
        s ^= (s >> 27)
        self.state = s
        return (s * _MULT) & _MASK64

    def next_uniform(self) -> float:
        """Uniform in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _INV_2_53

    def raw_block(self, count: int) -> np.ndarray:
        """The next `count` outputs as a uint64 vector (stream advances)."""
        return np.array([self.next_u64() for _ in range(count)], dtype=np.uint64)


def _gaussian_block(rng: Xorshift64Star, count: int) -> np.ndarray:
    """`count` standard normals via Box-Muller, 2 stream draws per pair.

    Pair m maps draw 2m to the radius variate and draw 2m+1 to the angle;
    both z0 = r cos and z1 = r sin are emitted in order. The radius uniform
    is shifted into (0, 1] so the log never sees zero.
    """
    pairs = (count + 1) // 2
    raw = rng.raw_block(2 * pairs)
    u1 = ((raw[0::2] >> np.uint64(11)).astype(float) + 1.0) * _INV_2_53
    u2 = (raw[1::2] >> np.uint64(11)).astype(float) * _INV_2_53
    r = np.sqrt(-2.0 * np.log(u1))
    ang = 2.0 * np.pi * u2
    z = np.empty(2 * pairs)
    z[0::2] = r * np.cos(ang)
    z[1::2] = r * np.sin(ang)
    return z[:count]


def _apply_gaussian(img: np.ndarray, s: float, rng: Xorshift64Star) -> np.ndarray:
    if s == 0:
        return img.copy()  # stream untouched: mixed(s=0) == impulse alone
    z = _gaussian_block(rng, img.size)
    return np.clip(img + s * z.reshape(img.shape), 0.0, 255.0)


def _apply_impulse(img: np.ndarray, p: float, rng: Xorshift64Star) -> np.ndarray:
    out = img.copy()
    flat = out.ravel()
    for k in range(flat.size):
        if rng.next_uniform() < p:
            flat[k] = 0.0 if rng.next_uniform() < 0.5 else 255.0
    return out


def _check_noise_args(img, s: float, p: float) -> np.ndarray:
    arr = np.asarray(img, dtype=float)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"image must be a nonempty 2D array, got shape {arr.shape}")
    if s < 0:
        raise ValueError(f"noise std must be nonnegative, got {s}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"impulse fraction must lie in [0, 1], got {p}")
    return arr


def add_gaussian_noise(img, s: float, seed: int) -> np.ndarray:
    """Additive white Gaussian noise of std `s`, clipped to [0, 255]."""
    arr = _check_noise_args(img, s, 0.0)
    return _apply_gaussian(arr, float(s), Xorshift64Star(seed))


def add_impulse_noise(img, p: float, seed: int) -> np.ndarray:
    """Salt-and-pepper corruption: each pixel replaced with probability `p`
    by 0 or 255 (equal chance). One stream draw per pixel, plus one more
    only when the pixel is corrupted."""
    arr = _check_noise_args(img, 0.0, p)
    return _apply_impulse(arr, float(p), Xorshift64Star(seed))


def add_mixed_noise(img, s: float, p: float, seed: int) -> np.ndarray:
    """Gaussian stage then impulse stage on one shared stream."""
    arr = _check_noise_args(img, s, p)
    rng = Xorshift64Star(seed)
    return _apply_impulse(_apply_gaussian(arr, float(s), rng), float(p), rng)


@dataclass(frozen=True)
class NoiseSpec:
    """One noise configuration from the benchmark grid."""

    kind: str
    seed: int
    s: float = 0.0
    p: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("gaussian", "impulse", "mixed"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.s < 0:
            raise ValueError(f"noise std must be nonnegative, got {self.s}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"impulse fraction must lie in [0, 1], got {self.p}")
        if not 0 <= int(self.seed) < (1 << 64):
            raise ValueError("seed must fit in 64 unsigned bits")

    def describe(self) -> str:
        if self.kind == "gaussian":
            return "gaussian(s=%g)" % self.s
        if self.kind == "impulse":
            return "impulse(p=%g)" % self.p
        return "mixed(s=%g,p=%g)" % (self.s, self.p)

    def apply(self, img) -> np.ndarray:
        if self.kind == "gaussian":
            return add_gaussian_noise(img, self.s, self.seed)
        if self.kind == "impulse":
            return add_impulse_noise(img, self.p, self.seed)
        return add_mixed_noise(img, self.s, self.p, self.seed)
