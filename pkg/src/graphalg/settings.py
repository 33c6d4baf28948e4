"""Runtime settings read from the environment.

Every knob has a default in ``graphalg.defs``; an environment variable of
the form ``GRAPHALG_<NAME>`` overrides it. CLI flags override both.
"""

from __future__ import annotations

import os

from graphalg.defs import (
    DEFAULT_FUEL,
    DEFAULT_LOG_LEVEL,
    DEFAULT_ORACLE_DEPTH,
    DEFAULT_REWRITE_FUEL,
)
from graphalg.errors import InputError

_PREFIX = "GRAPHALG_"
_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def get(key: str, default=None):
    """Read a raw setting value."""
    return os.environ.get(_PREFIX + key.upper(), default)


def set(key: str, value) -> None:
    """Write a setting for the current process."""
    os.environ[_PREFIX + key.upper()] = str(value)


def _positive_int(key: str, default: int) -> int:
    raw = get(key)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{_PREFIX}{key.upper()}={raw!r} is not an integer") from None
    if value < 1:
        raise InputError(f"{_PREFIX}{key.upper()} must be positive, got {value}")
    return value


# ── Convenience helpers for common settings ──────────────────────────

def fuel() -> int:
    return _positive_int("fuel", DEFAULT_FUEL)


def rewrite_fuel() -> int:
    return _positive_int("rewrite_fuel", DEFAULT_REWRITE_FUEL)


def oracle_depth() -> int:
    return _positive_int("oracle_depth", DEFAULT_ORACLE_DEPTH)


def log_level() -> str:
    level = str(get("log_level", DEFAULT_LOG_LEVEL)).upper()
    if level not in _LEVELS:
        raise InputError(f"unknown log level {level!r}")
    return level
