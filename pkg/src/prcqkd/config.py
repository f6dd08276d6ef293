"""Run configuration: a flat, JSON-compatible key set consumed by the CLI."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from typing import Optional

from .errors import ConfigError
from .params import ScenarioKind, SystemParams

PARAM_KEYS = tuple(f.name for f in fields(SystemParams))
LASER_KEYS = ("rep_rate_hz", "linewidth_a_hz", "linewidth_b_hz")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    # physical parameters (same names and defaults as SystemParams)
    v_mod: float = 6.0
    beta: float = 0.96
    eps_a: float = 0.002
    eps_b: float = 0.002
    l_ac_km: float = 0.0
    l_bc_km: float = 0.0
    loss_db_per_km: float = 0.2
    rep_rate_hz: Optional[float] = None
    linewidth_a_hz: Optional[float] = None
    linewidth_b_hz: Optional[float] = None
    lo_ratio: float = 1e8
    v_laser_override: Optional[float] = 0.005
    eps_prc_mode: str = "approx"
    # relay placement
    scenario: str = "extreme_asymmetric"
    distance_km: float = 0.0
    ideal_calibration: bool = False
    # sweep
    axis: str = "distance_km"
    start: float = 0.0
    stop: float = 100.0
    points: int = 101
    scale: str = "linear"
    # optimisers and root finders
    vm_min: float = 1.0
    vm_max: float = 40.0
    vm_tol: float = 0.01
    v_laser_low: float = 1e-6
    v_laser_high: float = 0.2
    max_km: float = 300.0
    distance_tol: float = 0.01
    # Monte Carlo
    n_pulses: int = 100_000
    seed: int = 42
    workers: int = 1
    # output
    format: Optional[str] = None
    output: Optional[str] = None

    def system_params(self) -> SystemParams:
        return SystemParams(**{k: getattr(self, k) for k in PARAM_KEYS})

    def scenario_kind(self) -> ScenarioKind:
        return ScenarioKind(self.scenario, self.distance_km)

    def to_dict(self) -> dict:
        return asdict(self)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key, value):
    t = _TYPES[key]
    optional = t.startswith("Optional")
    base = t.removeprefix("Optional[").removesuffix("]")
    if value is None:
        if optional:
            return None
        raise ConfigError([(key, "may not be null")])
    if base == "bool":
        if isinstance(value, bool):
            return value
    elif base == "int":
        if isinstance(value, int) and not isinstance(value, bool):
            return value
        if isinstance(value, float) and value.is_integer():
            return int(value)
    elif base == "float":
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
    elif base == "str":
        if isinstance(value, str):
            return value
    raise ConfigError([(key, f"expected {base}, got {value!r}")])


def from_dict(data: dict, base: Optional[RunConfig] = None) -> RunConfig:
    """Build a config from ``data`` layered over ``base`` (or the defaults).

    Unknown keys are rejected. V_laser comes from one source: giving only
    linewidth/repetition-rate keys clears the inherited override, and giving
    only ``v_laser_override`` clears inherited linewidths. Giving both in
    ``data`` is left for validation to reject.
    """
    if not isinstance(data, dict):
        raise ConfigError([("config", "top level must be a key/value object")])
    unknown = [k for k in data if k not in _TYPES]
    if unknown:
        raise ConfigError([(k, "unknown configuration key") for k in unknown])
    values = (base or RunConfig()).to_dict()
    for k, v in data.items():
        values[k] = _coerce(k, v)
    laser_given = any(data.get(k) is not None for k in LASER_KEYS)
    if laser_given and "v_laser_override" not in data:
        values["v_laser_override"] = None
    if not laser_given and data.get("v_laser_override") is not None:
        for k in LASER_KEYS:
            values[k] = None
    if values["format"] is not None and values["format"] not in FORMATS:
        raise ConfigError([("format", f"must be one of {FORMATS}, got {values['format']!r}")])
    return RunConfig(**values)


def loads(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([("config", f"not valid JSON: {exc}")]) from exc
    return from_dict(data, base)


def load(path, base: Optional[RunConfig] = None) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read(), base)
    except OSError as exc:
        raise ConfigError([("config", f"cannot read {path}: {exc.strerror}")]) from exc
