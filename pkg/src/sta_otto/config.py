"""Configuration loading for the command line front end.

A config file is either flat ``key = value`` text (``#`` starts a comment)
or a JSON object; a JSON object with a ``"config"`` member, as written by
``sta-otto cycle``, is read from that member. Command line flags override
file values.

Keys and defaults::

    omega1, omega2, beta1, beta2   required, omega2 > omega1 > 0, beta1 > beta2 > 0
    tau                            stroke duration (trace, cycle)
    method                         AD | NA | CD | LCD | IE            (default IE)
    tau_min, tau_max               sweep range (sweep, pareto)
    n_points                       sweep points                       (default 40)
    spacing                        linear | log                       (default log)
    methods                        comma separated method names       (default all;
                                                                       pareto: NA,CD,LCD,IE)
    quad_rel_tol                   Simpson relative tolerance         (default 1e-10)
    ode_steps                      RK4 steps per stroke, Richardson   (default 4096)
                                   check always on
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .dynamics import OdeConfig, QuadratureConfig
from .engine import BathPair, CycleConfig, Method
from .errors import ConfigError

DEFAULTS: dict[str, Any] = {
    "method": "IE",
    "n_points": 40,
    "spacing": "log",
    "quad_rel_tol": 1e-10,
    "ode_steps": 4096,
}

FLOAT_KEYS = ("omega1", "omega2", "beta1", "beta2", "tau", "tau_min", "tau_max", "quad_rel_tol")
INT_KEYS = ("n_points", "ode_steps")
TEXT_KEYS = ("method", "spacing", "methods")
KNOWN_KEYS = FLOAT_KEYS + INT_KEYS + TEXT_KEYS


class Spacing(str, enum.Enum):
    LINEAR = "linear"
    LOG = "log"


@dataclass(frozen=True)
class SweepSpec:
    tau_min: float
    tau_max: float
    n_points: int = 40
    spacing: Spacing = Spacing.LOG
    methods: tuple[Method, ...] = tuple(Method)

    def __post_init__(self):
        if not self.tau_min > 0:
            raise ConfigError("tau_min", "must be > 0")
        if not self.tau_max > self.tau_min:
            raise ConfigError("tau_max", "must be > tau_min")
        if self.n_points < 2:
            raise ConfigError("n_points", "must be >= 2")
        if not self.methods:
            raise ConfigError("methods", "must name at least one method")
        ordered = tuple(sorted({Method(m) for m in self.methods}, key=lambda m: m.value))
        object.__setattr__(self, "methods", ordered)
        object.__setattr__(self, "spacing", Spacing(self.spacing))

    def taus(self) -> list[float]:
        """Abscissae including both endpoints; log spacing is a geometric progression."""
        if self.spacing is Spacing.LINEAR:
            grid = np.linspace(self.tau_min, self.tau_max, self.n_points)
        else:
            grid = np.geomspace(self.tau_min, self.tau_max, self.n_points)
        grid[0], grid[-1] = self.tau_min, self.tau_max
        return [float(t) for t in grid]


def read_config_file(path: str | Path) -> dict[str, Any]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON in {path}: {exc}") from None
        if isinstance(data.get("config"), dict):
            data = data["config"]
        return dict(data)
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError("config", f"{path}:{lineno}: expected 'key = value'")
        values[key.strip()] = value.strip()
    return values


def _coerce(key: str, value: Any) -> Any:
    if key in FLOAT_KEYS:
        try:
            out = float(value)
        except (TypeError, ValueError):
            raise ConfigError(key, f"expected a number, got {value!r}") from None
        if not math.isfinite(out):
            raise ConfigError(key, "must be finite")
        return out
    if key in INT_KEYS:
        try:
            out = float(value)
        except (TypeError, ValueError):
            raise ConfigError(key, f"expected an integer, got {value!r}") from None
        if not out.is_integer():
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return int(out)
    if key == "method":
        try:
            return Method(str(value).strip().upper())
        except ValueError:
            raise ConfigError(key, f"must be one of {[m.value for m in Method]}") from None
    if key == "methods":
        items = value if isinstance(value, (list, tuple)) else str(value).split(",")
        try:
            return tuple(Method(str(m).strip().upper()) for m in items if str(m).strip())
        except ValueError:
            raise ConfigError(key, f"entries must be among {[m.value for m in Method]}") from None
    if key == "spacing":
        try:
            return Spacing(str(value).strip().lower())
        except ValueError:
            raise ConfigError(key, "must be 'linear' or 'log'") from None
    raise ConfigError(key, "unknown key")


def load_settings(path: str | Path | None = None, overrides: dict[str, Any] | None = None) -> dict[str, Any]:
    """Merge defaults, file values and overrides; type-check and range-check every key."""
    raw: dict[str, Any] = {}
    if path is not None:
        raw.update(read_config_file(path))
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    settings = {key: _coerce(key, value) for key, value in DEFAULTS.items()}
    for key, value in raw.items():
        if key not in KNOWN_KEYS:
            raise ConfigError(key, "unknown key")
        settings[key] = _coerce(key, value)

    for key in ("omega1", "omega2", "beta1", "beta2"):
        if key not in settings:
            raise ConfigError(key, "missing required key")
    if not settings["omega1"] > 0:
        raise ConfigError("omega1", "must be > 0")
    if not settings["omega2"] > settings["omega1"]:
        raise ConfigError("omega2", "must be > omega1")
    if not settings["beta2"] > 0:
        raise ConfigError("beta2", "must be > 0")
    if not settings["beta1"] > settings["beta2"]:
        raise ConfigError("beta1", "must be > beta2 (cold bath colder than hot bath)")
    if "tau" in settings and not settings["tau"] > 0:
        raise ConfigError("tau", "must be > 0")
    if not settings["quad_rel_tol"] > 0:
        raise ConfigError("quad_rel_tol", "must be > 0")
    if settings["ode_steps"] < 16:
        raise ConfigError("ode_steps", "must be >= 16")
    return settings


def cycle_config(settings: dict[str, Any], tau: float | None = None,
                 method: Method | None = None) -> CycleConfig:
    if tau is None:
        if "tau" not in settings:
            raise ConfigError("tau", "missing required key")
        tau = settings["tau"]
    return CycleConfig(
        omega1=settings["omega1"],
        omega2=settings["omega2"],
        baths=BathPair(settings["beta1"], settings["beta2"]),
        tau=tau,
        method=method or settings["method"],
        quad=QuadratureConfig(rel_tol=settings["quad_rel_tol"]),
        ode=OdeConfig(n_steps=settings["ode_steps"]),
    )


def parse_config(path: str | Path | None = None, overrides: dict[str, Any] | None = None) -> CycleConfig:
    return cycle_config(load_settings(path, overrides))


def sweep_spec(settings: dict[str, Any], default_methods: tuple[Method, ...] = tuple(Method)) -> SweepSpec:
    for key in ("tau_min", "tau_max"):
        if key not in settings:
            raise ConfigError(key, "missing required key")
    return SweepSpec(
        tau_min=settings["tau_min"],
        tau_max=settings["tau_max"],
        n_points=settings["n_points"],
        spacing=settings["spacing"],
        methods=settings.get("methods", default_methods),
    )


def settings_to_config_dict(config: CycleConfig) -> dict[str, Any]:
    """Config keys that reproduce ``config`` when fed back through :func:`load_settings`."""
    return {
        "omega1": config.omega1,
        "omega2": config.omega2,
        "beta1": config.baths.beta_cold,
        "beta2": config.baths.beta_hot,
        "tau": config.tau,
        "method": config.method.value,
        "quad_rel_tol": config.quad.rel_tol,
        "ode_steps": config.ode.n_steps,
    }
