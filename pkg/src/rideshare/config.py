"""Flat dotted-key run configuration.

A config file is a JSON object whose keys are either dotted (``"grid.q"``)
or nested one level (``{"grid": {"q": 10}}``); both forms flatten to the
same keys.  Unknown keys are rejected.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Mapping

SEED_ENV = "RIDESHARE_SEED"

DEFAULTS: dict[str, Any] = {
    "bbox.lon_min": -74.02,
    "bbox.lon_max": -73.93,
    "bbox.lat_min": 40.70,
    "bbox.lat_max": 40.82,
    "grid.q": 10,
    "grid.weights_file": None,
    "grid.minutes_per_unit": 1.0,
    "records.path": None,
    "records.limit": 10000,
    "kde.bandwidth": None,
    "demand.distribution": None,
    "arrivals.lambda": 2.0,
    "arrivals.seed": 0,
    "cdf.mode": "paper",
    "waiting.delta_u_fraction": 1.0 / 50.0,
    "waiting.mode": "auto",
    "waiting.samples": 20000,
    "passengers.n": 1000,
    "passengers.epsilon": 0.6,
    "metrics.bin_width_minutes": 0.5,
    "baseline.tau_minutes": [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0],
    "sweep.epsilons": [round(0.1 * k, 1) for k in range(11)],
    "output.dir": "out",
}

_CHOICES = {
    "cdf.mode": ("paper", "standard"),
    "waiting.mode": ("auto", "exact", "sampled"),
}


class ConfigError(ValueError):
    pass


def flatten(data: Mapping[str, Any], prefix: str = "") -> dict[str, Any]:
    out = {}
    for key, value in data.items():
        full = f"{prefix}{key}"
        if isinstance(value, Mapping):
            out.update(flatten(value, full + "."))
        else:
            out[full] = value
    return out


def parse_override(text: str) -> tuple[str, Any]:
    """``key=value`` where the value is JSON when it parses, else a plain string."""
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not key=value")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def validate(cfg: Mapping[str, Any]) -> list[str]:
    """All problems with ``cfg``; empty when valid."""
    problems = []
    for key in cfg:
        if key not in DEFAULTS:
            problems.append(f"unknown key {key!r}")
    def num(key, lo=None, strict=False, integer=False):
        v = cfg.get(key)
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            problems.append(f"{key} must be a number, got {v!r}")
            return
        if integer and int(v) != v:
            problems.append(f"{key} must be an integer, got {v!r}")
        if lo is not None and (v <= lo if strict else v < lo):
            problems.append(f"{key} must be {'>' if strict else '>='} {lo}, got {v!r}")

    num("grid.q", 2, integer=True)
    num("grid.minutes_per_unit", 0, strict=True)
    num("arrivals.lambda", 0, strict=True)
    num("waiting.delta_u_fraction", 0, strict=True)
    num("waiting.samples", 1, integer=True)
    num("passengers.n", 1, integer=True)
    num("passengers.epsilon", 0)
    num("metrics.bin_width_minutes", 0, strict=True)
    if cfg.get("records.limit") is not None:
        num("records.limit", 1, integer=True)
    if cfg.get("kde.bandwidth") is not None:
        num("kde.bandwidth", 0, strict=True)
    if cfg.get("arrivals.seed") is not None:
        num("arrivals.seed", 0, integer=True)
    for axis in ("lon", "lat"):
        lo, hi = cfg.get(f"bbox.{axis}_min"), cfg.get(f"bbox.{axis}_max")
        if not all(isinstance(v, (int, float)) for v in (lo, hi)) or lo >= hi:
            problems.append(f"bbox.{axis}_min must be a number below bbox.{axis}_max")
    for key, choices in _CHOICES.items():
        if cfg.get(key) not in choices:
            problems.append(f"{key} must be one of {choices}, got {cfg.get(key)!r}")
    for key in ("baseline.tau_minutes", "sweep.epsilons"):
        v = cfg.get(key)
        if not isinstance(v, list) or not all(isinstance(x, (int, float)) and x >= 0 for x in v):
            problems.append(f"{key} must be a list of non-negative numbers")
    if isinstance(cfg.get("sweep.epsilons"), list) and any(
        isinstance(x, (int, float)) and x > 1 for x in cfg["sweep.epsilons"]
    ):
        problems.append("sweep.epsilons must lie in [0, 1]")
    return problems


def load_config(path: str | Path | None = None, overrides: Mapping[str, Any] | None = None,
                env: Mapping[str, str] | None = None) -> dict[str, Any]:
    """Defaults, then the file, then ``overrides``, then ``RIDESHARE_SEED``; validated."""
    cfg = dict(DEFAULTS)
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file {path} not found")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        if not isinstance(data, Mapping):
            raise ConfigError(f"{path}: top level must be an object")
        cfg.update(flatten(data))
    cfg.update(overrides or {})
    env = os.environ if env is None else env
    if env.get(SEED_ENV):
        try:
            cfg["arrivals.seed"] = int(env[SEED_ENV])
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV} must be an integer") from exc
    problems = validate(cfg)
    if problems:
        raise ConfigError("invalid configuration:\n  " + "\n  ".join(problems))
    return cfg
