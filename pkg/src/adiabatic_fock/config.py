"""Run configuration: scenario presets, TOML config files and flag overrides.

A config file is flat TOML. Every key is optional; ``scenario`` names a preset
whose values the remaining keys override::

    scenario = "smith-counterexample"
    alpha = "3"            # number, or string with complex syntax "1+0.5j"
    boundary = "periodic"  # rigid | periodic | antiperiodic
    T = 13.3444
    grid_points = 2001
    substeps = 20000       # omit to scale 20000 * T / 13.3444
    eps_condition = 1e-3
    dominance_threshold = 2.0
    hp_diag = [2, 4, 5, 3, 1]   # or: hp_polynomial = "x1 - 2"
    output_dir = "results"
    figures = true
"""

from __future__ import annotations

import dataclasses
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .fockspace import BoundaryCondition


@dataclass(frozen=True)
class RunConfig:
    scenario: str = "custom"
    modes: int = 1
    dims: tuple[int, ...] = (5,)
    boundary: str = "rigid"
    alpha: tuple[complex, ...] = (1.0 + 0j,)
    shifted: bool = False
    T: float = 13.3444
    grid_points: int = 2001
    substeps: int | None = None
    eps_condition: float = 1e-3
    dominance_threshold: float = 2.0
    max_rounds: int = 8
    hp_diag: tuple[float, ...] | None = None
    hp_polynomial: str | None = None
    output_dir: str = "results"
    figures: bool = True

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    @property
    def alpha_value(self):
        return self.alpha[0] if len(self.alpha) == 1 else self.alpha


SMITH_DIAG = (2.0, 4.0, 5.0, 3.0, 1.0)
_SMITH = RunConfig(scenario="smith-counterexample", dims=(5,), boundary="rigid", alpha=(1.0 + 0j,),
                   shifted=True, T=13.3444, hp_diag=SMITH_DIAG)

SCENARIOS: dict[str, tuple[RunConfig, str]] = {
    "smith-counterexample": (_SMITH, "alpha=1, T=13.3444, rigid d=5: criterion picks the excited state |0>"),
    "alpha3": (_SMITH.replace(scenario="alpha3", alpha=(3.0 + 0j,)),
               "alpha=3, same T: no avoided crossing, |4> dominates"),
    "periodic": (_SMITH.replace(scenario="periodic", boundary="periodic"),
                 "alpha=1 with periodic truncation"),
    "antiperiodic": (_SMITH.replace(scenario="antiperiodic", boundary="antiperiodic"),
                     "alpha=1 with anti-periodic truncation"),
    "dioph-x-minus-2": (RunConfig(scenario="dioph-x-minus-2", dims=(8,), alpha=(1.0 + 0j,),
                                  hp_polynomial="x1 - 2"),
                        "H_P = (x - 2)^2 on 8 rigid levels, ground state |2> in the interior"),
}


def preset(name: str) -> RunConfig:
    try:
        return SCENARIOS[name][0]
    except KeyError:
        raise ConfigError(f"unknown scenario {name!r}; known: {', '.join(SCENARIOS)}") from None


def parse_complex(value: Any) -> complex:
    if isinstance(value, bool):
        raise ConfigError(f"alpha must be numeric, got {value!r}")
    if isinstance(value, (int, float, complex)):
        return complex(value)
    try:
        return complex(str(value).replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ConfigError(f"cannot parse {value!r} as a complex number") from None


def _coerce(name: str, value: Any) -> Any:
    if name == "alpha":
        vals = value if isinstance(value, (list, tuple)) else [value]
        return tuple(parse_complex(v) for v in vals)
    if name == "dims":
        vals = value if isinstance(value, (list, tuple)) else [value]
        return tuple(_int(name, v) for v in vals)
    if name == "hp_diag":
        if value is None:
            return None
        if not isinstance(value, (list, tuple)) or not value:
            raise ConfigError("hp_diag must be a non-empty list of numbers")
        return tuple(_float(name, v) for v in value)
    if name in ("modes", "grid_points", "max_rounds"):
        return _int(name, value)
    if name == "substeps":
        return None if value is None else _int(name, value)
    if name in ("T", "eps_condition", "dominance_threshold"):
        return _float(name, value)
    if name in ("shifted", "figures"):
        if not isinstance(value, bool):
            raise ConfigError(f"{name} must be true or false, got {value!r}")
        return value
    if name == "boundary":
        return BoundaryCondition.parse(value).value
    if name in ("scenario", "output_dir", "hp_polynomial"):
        return None if value is None and name == "hp_polynomial" else str(value)
    raise ConfigError(f"unknown field {name!r}")


def _int(name, v) -> int:
    if isinstance(v, bool) or not _float(name, v).is_integer():
        raise ConfigError(f"{name} must be an integer, got {v!r}")
    return int(float(v))


def _float(name, v) -> float:
    if isinstance(v, bool):
        raise ConfigError(f"{name} must be a number, got {v!r}")
    try:
        return float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {v!r}") from None


FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def apply_overrides(cfg: RunConfig, values: dict[str, Any], lines: dict[str, int] | None = None) -> RunConfig:
    changes = {}
    for key, raw in values.items():
        where = f" (line {lines[key]})" if lines and key in lines else ""
        if key not in FIELDS:
            raise ConfigError(f"unknown field {key!r}{where}")
        try:
            changes[key] = _coerce(key, raw)
        except ConfigError as exc:
            raise ConfigError(f"field {key!r}{where}: {exc}") from None
    if "hp_diag" in changes and "hp_polynomial" not in changes:
        changes["hp_polynomial"] = None
    if "hp_polynomial" in changes and changes["hp_polynomial"] and "hp_diag" not in changes:
        changes["hp_diag"] = None
    if "dims" in changes and "modes" not in changes:
        changes["modes"] = len(changes["dims"])
    return validate(cfg.replace(**changes))


def validate(cfg: RunConfig) -> RunConfig:
    if cfg.modes < 1 or len(cfg.dims) != cfg.modes:
        raise ConfigError(f"dims {cfg.dims} do not match modes={cfg.modes}")
    if any(d < 2 for d in cfg.dims):
        raise ConfigError(f"every truncation size must be >= 2, got {cfg.dims}")
    if len(cfg.alpha) not in (1, cfg.modes):
        raise ConfigError(f"alpha has {len(cfg.alpha)} components for {cfg.modes} modes")
    if cfg.T <= 0 or cfg.eps_condition <= 0 or cfg.dominance_threshold <= 0:
        raise ConfigError("T, eps_condition and dominance_threshold must be positive")
    if cfg.grid_points < 2:
        raise ConfigError("grid_points must be at least 2")
    if cfg.substeps is not None and cfg.substeps < 100:
        raise ConfigError("substeps must be at least 100")
    if cfg.max_rounds < 2:
        raise ConfigError("max_rounds must be at least 2")
    if (cfg.hp_diag is None) == (cfg.hp_polynomial is None):
        raise ConfigError("exactly one of hp_diag and hp_polynomial must be set")
    if cfg.shifted and cfg.modes > 1:
        raise ConfigError("shifted H_I is only defined for a single mode")
    return cfg


def _key_lines(text: str) -> dict[str, int]:
    lines = {}
    for n, line in enumerate(text.splitlines(), 1):
        m = re.match(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*=", line)
        if m:
            lines.setdefault(m.group(1), n)
    return lines


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    lines = _key_lines(text)
    for key, value in data.items():
        if isinstance(value, dict):
            raise ConfigError(f"{path}: tables are not supported (line {lines.get(key, '?')}: [{key}])")
    base = preset(data["scenario"]) if data.get("scenario") in SCENARIOS else RunConfig(
        scenario=str(data.get("scenario", "custom")), hp_diag=SMITH_DIAG)
    try:
        return apply_overrides(base, data, lines)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
