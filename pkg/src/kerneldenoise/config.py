"""Engine configuration from `key = value` text files and CLI overrides.

Unknown keys are rejected rather than ignored so a typo cannot silently
run the denoiser with defaults. The digest is a stable hash of every
field, used to stamp benchmark rows with the exact configuration.
"""

from __future__ import annotations

import dataclasses
import hashlib

from .engine import EngineConfig

_INT_FIELDS = frozenset({"patch_n", "basis_levels", "max_iters"})
_OPTIONAL_FLOAT_FIELDS = frozenset({"radius"})
_FIELD_NAMES = tuple(f.name for f in dataclasses.fields(EngineConfig))


class ConfigError(ValueError):
    """Rejected configuration text or override."""


def _coerce(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _INT_FIELDS:
            return int(raw)
        if key in _OPTIONAL_FLOAT_FIELDS and raw.lower() in ("auto", "none"):
            return None
        return float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {key!r}: {raw!r}") from None


def parse_config(text: str) -> dict:
    """Parse `key = value` lines (# comments, blank lines ignored)."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _FIELD_NAMES:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        out[key] = _coerce(key, raw)
    return out


def parse_override(item: str) -> tuple[str, object]:
    """One --set KEY=VALUE argument."""
    if "=" not in item:
        raise ConfigError(f"override must look like key=value, got {item!r}")
    key, raw = (part.strip() for part in item.split("=", 1))
    if key not in _FIELD_NAMES:
        raise ConfigError(f"unknown config key {key!r}")
    return key, _coerce(key, raw)


def build_config(file_text: str | None = None, overrides=()) -> EngineConfig:
    """Defaults, then file values, then --set overrides (last wins)."""
    fields = {}
    if file_text is not None:
        fields.update(parse_config(file_text))
    for item in overrides:
        key, value = parse_override(item)
        fields[key] = value
    try:
        return EngineConfig(**fields)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path, overrides=()) -> EngineConfig:
    with open(path, "r", encoding="utf-8") as f:
        return build_config(f.read(), overrides)


def config_digest(cfg: EngineConfig) -> str:
    """16-hex-char digest over every field; changes iff any field changes."""
    canon = ";".join(f"{name}={getattr(cfg, name)!r}" for name in _FIELD_NAMES)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]
