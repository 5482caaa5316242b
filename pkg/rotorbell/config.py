"""Configuration defaults and layering utilities for rotorbell.

The constants here are the single source of truth for numerical ceilings and
CLI defaults. The helpers load the optional flat TOML run file, merge it with
command-line values and resolve the scan thread count from the environment.
These utilities have no dependency on the numerical modules and can be used
in any Python context.
"""

from __future__ import annotations

import os
import tomllib
import typing as typ

from ._validation_helpers import ConfigValidationError
from .types import RunFileConfig

if typ.TYPE_CHECKING:
    import collections.abc as cabc
    from pathlib import Path

DEFAULT_GRID_POINTS = 101
DEFAULT_MAX_PRODUCT_DIM = 4096
MAX_TRUNCATION = 60
SCAN_THREADS_ENV = "ROTORBELL_SCAN_THREADS"

# Tolerance ladder shared by the numerical modules.
EIGENSYSTEM_TOLERANCE = 1e-12
NORMALIZATION_TOLERANCE = 1e-12
DENSITY_TOLERANCE = 1e-10


def load_config_file(path: Path) -> RunFileConfig:
    """Load a flat key-value run file.

    Parameters
    ----------
    path
        TOML document holding only top-level scalar or array values.

    Returns
    -------
    RunFileConfig
        The parsed mapping, keyed as written in the file.

    Raises
    ------
    ConfigValidationError
        If the file cannot be read or parsed, contains nested tables, or
        holds a key outside :class:`~rotorbell.types.RunFileConfig`.

    """
    try:
        with path.open("rb") as stream:
            document = tomllib.load(stream)
    except OSError as exc:
        msg = f"Cannot read config file {path}: {exc}"
        raise ConfigValidationError(msg) from exc
    except tomllib.TOMLDecodeError as exc:
        msg = f"Config file {path} is not valid TOML: {exc}"
        raise ConfigValidationError(msg) from exc

    for key, value in document.items():
        if isinstance(value, dict):
            msg = f"Config file {path} must be flat; key {key!r} is a table"
            raise ConfigValidationError(msg)
        if key not in RunFileConfig.__optional_keys__:
            msg = f"{key}: unknown configuration key"
            raise ConfigValidationError(msg)
    return typ.cast("RunFileConfig", document)


def merge_configs(*configs: cabc.Mapping[str, object]) -> dict[str, object]:
    """Merge configuration layers, later layers overriding earlier ones.

    Values equal to ``None`` are treated as "not supplied" and never
    override an earlier layer, so unset command-line flags leave file values
    intact. Merging is shallow.

    Parameters
    ----------
    *configs
        Configuration mappings ordered from lowest to highest precedence.

    Returns
    -------
    dict[str, object]
        A new dictionary containing the merged configuration.

    Example
    -------
    File values are overridden by explicit flags only::

        merged = merge_configs({"M": 3, "eta": 0.1}, {"M": 5, "eta": None})
        # Result: {"M": 5, "eta": 0.1}

    """
    result: dict[str, object] = {}
    for config in configs:
        result.update({
            key: value for key, value in config.items() if value is not None
        })
    return result


def scan_thread_count(environ: cabc.Mapping[str, str] | None = None) -> int:
    """Return the worker count for parallel grid scans.

    Parameters
    ----------
    environ
        Environment mapping to consult; defaults to ``os.environ``.

    Returns
    -------
    int
        The value of ``ROTORBELL_SCAN_THREADS`` when set, otherwise the
        machine parallelism.

    Raises
    ------
    ConfigValidationError
        If the environment variable is not a positive integer.

    """
    env = os.environ if environ is None else environ
    raw = env.get(SCAN_THREADS_ENV)
    if raw is None or not raw.strip():
        return os.cpu_count() or 1
    try:
        count = int(raw)
    except ValueError as exc:
        msg = f"{SCAN_THREADS_ENV} must be a positive integer, got {raw!r}"
        raise ConfigValidationError(msg) from exc
    if count <= 0:
        msg = f"{SCAN_THREADS_ENV} must be a positive integer, got {raw!r}"
        raise ConfigValidationError(msg)
    return count


__all__ = [
    "DEFAULT_GRID_POINTS",
    "DEFAULT_MAX_PRODUCT_DIM",
    "MAX_TRUNCATION",
    "SCAN_THREADS_ENV",
    "load_config_file",
    "merge_configs",
    "scan_thread_count",
]
