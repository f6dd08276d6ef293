"""System parameters, relay geometries and validation.

All physical quantities are in shot-noise units (SNU) unless the field name
says otherwise. Defaults reproduce the reference operating point: V_M = 6,
beta = 0.96, eps_A = eps_B = 0.002, V_laser = 0.005 rad^2,
|alpha_LO|^2 / V_M = 1e8 and 0.2 dB/km fibre.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Optional

from .errors import ConfigError

EPS_PRC_MODES = ("exact", "approx")
SCENARIO_KINDS = ("extreme_asymmetric", "symmetric", "custom")


@dataclass(frozen=True)
class SystemParams:
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

    @property
    def lo_intensity(self) -> float:
        """LO photon number |alpha_LO|^2 = lo_ratio * V_M."""
        return self.lo_ratio * self.v_mod

    @property
    def total_distance_km(self) -> float:
        return self.l_ac_km + self.l_bc_km

    def with_v_laser(self, v_laser: float) -> "SystemParams":
        """Copy with V_laser set directly, dropping any linewidth description."""
        return replace(
            self,
            v_laser_override=v_laser,
            rep_rate_hz=None,
            linewidth_a_hz=None,
            linewidth_b_hz=None,
        )

    def with_linewidths(self, dnu_a: float, dnu_b: float, rep_rate: float) -> "SystemParams":
        """Copy with V_laser derived from laser linewidths and repetition rate."""
        return replace(
            self,
            v_laser_override=None,
            rep_rate_hz=rep_rate,
            linewidth_a_hz=dnu_a,
            linewidth_b_hz=dnu_b,
        )


@dataclass(frozen=True)
class ScenarioKind:
    kind: str = "custom"
    total_distance_km: float = 0.0


def _is_real(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def validate(params: SystemParams) -> SystemParams:
    """Check every invariant of ``params`` and return it unchanged.

    Raises:
        ConfigError: listing one ``(field, message)`` per violation.
    """
    bad = []

    def need(name, ok, msg):
        if not ok:
            bad.append((name, msg))

    p = params
    for f in fields(p):
        v = getattr(p, f.name)
        if f.name == "eps_prc_mode":
            need(f.name, v in EPS_PRC_MODES, f"must be one of {EPS_PRC_MODES}, got {v!r}")
        elif v is None:
            need(f.name, f.type.startswith("Optional"), "is required")
        else:
            need(f.name, _is_real(v), f"must be a finite number, got {v!r}")
    if bad:
        raise ConfigError(bad)

    need("v_mod", p.v_mod > 0, "modulation variance must be > 0")
    need("beta", 0 < p.beta <= 1, "reconciliation efficiency must lie in (0, 1]")
    need("eps_a", p.eps_a >= 0, "excess noise must be >= 0")
    need("eps_b", p.eps_b >= 0, "excess noise must be >= 0")
    need("l_ac_km", p.l_ac_km >= 0, "length must be >= 0")
    need("l_bc_km", p.l_bc_km >= 0, "length must be >= 0")
    need("loss_db_per_km", p.loss_db_per_km >= 0, "loss must be >= 0")
    need("lo_ratio", p.lo_ratio > 0, "LO intensity ratio must be > 0")

    laser = {
        "rep_rate_hz": p.rep_rate_hz,
        "linewidth_a_hz": p.linewidth_a_hz,
        "linewidth_b_hz": p.linewidth_b_hz,
    }
    given = [k for k, v in laser.items() if v is not None]
    if p.v_laser_override is not None:
        need("v_laser_override", p.v_laser_override >= 0, "V_laser must be >= 0")
        for k in given:
            bad.append((k, "conflicts with v_laser_override; give one V_laser source"))
    else:
        for k, v in laser.items():
            if v is None:
                bad.append((k, "required when v_laser_override is not set"))
        if p.rep_rate_hz is not None:
            need("rep_rate_hz", p.rep_rate_hz > 0, "repetition rate must be > 0")
        for k in ("linewidth_a_hz", "linewidth_b_hz"):
            if laser[k] is not None:
                need(k, laser[k] >= 0, "linewidth must be >= 0")

    if bad:
        raise ConfigError(bad)
    return params


def build_scenario(kind: ScenarioKind, base: SystemParams) -> SystemParams:
    """Place the relay according to ``kind``.

    ``extreme_asymmetric`` puts Charlie at Bob (L_AC = D, L_BC = 0);
    ``symmetric`` puts him midway; ``custom`` keeps ``base`` lengths.
    """
    validate(base)
    if kind.kind not in SCENARIO_KINDS:
        raise ConfigError([("kind", f"must be one of {SCENARIO_KINDS}, got {kind.kind!r}")])
    d = kind.total_distance_km
    if not _is_real(d) or d < 0:
        raise ConfigError([("total_distance_km", f"must be a finite number >= 0, got {d!r}")])
    if kind.kind == "extreme_asymmetric":
        return replace(base, l_ac_km=float(d), l_bc_km=0.0)
    if kind.kind == "symmetric":
        half = d / 2
        return replace(base, l_ac_km=d - half, l_bc_km=half)
    return base
