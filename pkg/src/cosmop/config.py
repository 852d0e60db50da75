"""Flat ``section.key -> value`` configuration read from a TOML file.

``[solver]`` with ``cmd = "z3 -in"`` becomes the key ``solver.cmd``;
nested tables flatten the same way.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULTS = {
    "solver.cmd": "z3 -in",
    "solver.timeout_ms": 120_000,
    "bench.reps": 35,
}


class ConfigError(ValueError):
    pass


def _flatten(table: dict, prefix: str, out: dict):
    for key, value in table.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            _flatten(value, name + ".", out)
        else:
            out[name] = value


def parse_config(text: str, name="<config>") -> dict:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{name}: {exc}") from None
    out: dict = {}
    _flatten(data, "", out)
    return out


def load_config(path=None) -> dict:
    """Defaults overlaid with ``path`` (if given); ``COSMOP_SMT_CMD`` wins for the solver."""
    cfg = dict(DEFAULTS)
    if path is not None:
        p = Path(path)
        cfg.update(parse_config(p.read_text(), str(p)))
    if os.environ.get("COSMOP_SMT_CMD"):
        cfg["solver.cmd"] = os.environ["COSMOP_SMT_CMD"]
    return cfg
