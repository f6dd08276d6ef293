"""Parameter sweeps, optimal modulation variance, V_laser tolerance and
maximum transmission distance."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, List, Tuple

import numpy as np

from .errors import BracketError, ConfigError, InfeasibleError, PrcError
from .keyrate import secret_key_rate
from .params import ScenarioKind, SystemParams, build_scenario, validate

AXES = ("v_mod", "distance_km", "v_laser", "lo_ratio")
SCALES = ("linear", "log10")

INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    points: int = 50
    scale: str = "linear"

    def validate(self) -> "SweepSpec":
        bad = []
        if self.axis not in AXES:
            bad.append(("axis", f"must be one of {AXES}, got {self.axis!r}"))
        if self.scale not in SCALES:
            bad.append(("scale", f"must be one of {SCALES}, got {self.scale!r}"))
        if not (isinstance(self.points, int) and self.points >= 2):
            bad.append(("points", f"need an integer >= 2, got {self.points!r}"))
        if not self.start < self.stop:
            bad.append(("start", f"start ({self.start!r}) must be below stop ({self.stop!r})"))
        if self.scale == "log10" and not self.start > 0:
            bad.append(("start", "log10 scale needs start > 0"))
        if bad:
            raise ConfigError(bad)
        return self

    def grid(self) -> np.ndarray:
        self.validate()
        if self.scale == "log10":
            return np.logspace(math.log10(self.start), math.log10(self.stop), self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    key_rate: float
    i_ab: float
    chi_be: float
    eps_prc: float

    @property
    def feasible(self) -> bool:
        return self.key_rate > 0


def at_axis(params: SystemParams, scenario: ScenarioKind, axis: str, value: float) -> SystemParams:
    """Parameters with ``axis`` set to ``value`` and the relay placed per ``scenario``."""
    value = float(value)
    if axis == "distance_km":
        if scenario.kind == "custom":
            raise ConfigError([("axis", "distance sweeps need a symmetric or extreme_asymmetric scenario")])
        scenario = replace(scenario, total_distance_km=value)
    elif axis == "v_mod":
        params = replace(params, v_mod=value)
    elif axis == "v_laser":
        params = params.with_v_laser(value)
    elif axis == "lo_ratio":
        params = replace(params, lo_ratio=value)
    else:
        raise ConfigError([("axis", f"must be one of {AXES}, got {axis!r}")])
    return build_scenario(scenario, params)


def _at_point(exc: PrcError, axis: str, value: float) -> PrcError:
    value = float(value)
    where = f"at {axis}={value!r}"
    if isinstance(exc, ConfigError):
        new = ConfigError([(f, f"{m} ({where})") for f, m in exc.violations])
    else:
        new = type(exc)(f"{where}: {exc}")
    new.axis_value = value
    return new


def key_rate_at(params, scenario, axis, value, ideal_calibration=False):
    try:
        return secret_key_rate(at_axis(params, scenario, axis, value), ideal_calibration)
    except PrcError as exc:
        raise _at_point(exc, axis, value) from exc


def sweep(spec: SweepSpec, params: SystemParams, scenario: ScenarioKind,
          ideal_calibration: bool = False) -> List[SweepRow]:
    """Evaluate the key rate on the grid of ``spec``, all else fixed."""
    validate(params)
    rows = []
    for x in spec.grid():
        r = key_rate_at(params, scenario, spec.axis, x, ideal_calibration)
        eps = 0.0 if ideal_calibration else r.noise.eps_prc
        rows.append(SweepRow(float(x), r.key_rate, r.i_ab, r.chi_be, eps))
    return rows


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-6) -> Tuple[float, float]:
    """Maximise a unimodal ``f`` on [lo, hi] to an interval width of ``tol``."""
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def scan_and_refine(f: Callable[[float], float], lo: float, hi: float,
                    tol: float = 0.01, scan_points: int = 64) -> Tuple[float, float]:
    """Coarse scan to bracket the maximum, then golden-section inside the bracket.

    The returned value is never worse than the best scan point.
    """
    xs = np.linspace(lo, hi, scan_points)
    ys = np.array([f(float(x)) for x in xs])
    i = int(np.argmax(ys))
    a = float(xs[max(i - 1, 0)])
    b = float(xs[min(i + 1, scan_points - 1)])
    x, y = golden_section_max(f, a, b, tol)
    if y < ys[i]:
        return float(xs[i]), float(ys[i])
    return x, y


def optimize_vm(params: SystemParams, scenario: ScenarioKind,
                v_range: Tuple[float, float] = (1.0, 40.0), tol: float = 0.01,
                ideal_calibration: bool = False) -> Tuple[float, float]:
    """Modulation variance maximising the key rate, and that key rate.

    Raises:
        InfeasibleError: the key rate is non-positive across ``v_range``.
    """
    lo, hi = v_range
    if not 0 < lo < hi:
        raise ConfigError([("v_range", f"need 0 < low < high, got {v_range!r}")])

    def k(v):
        return key_rate_at(params, scenario, "v_mod", v, ideal_calibration).key_rate

    v_best, k_best = scan_and_refine(k, lo, hi, tol)
    if not k_best > 0:
        raise InfeasibleError(f"no positive key rate for V_M in {v_range!r}")
    return v_best, k_best


def bisect_root(f: Callable[[float], float], lo: float, hi: float,
                xtol: float, ftol: float = math.inf, name: str = "x") -> float:
    """Bisection for the sign change of a function positive at ``lo`` and negative at ``hi``.

    Stops once the bracket is narrower than ``xtol`` and ``|f(mid)| <= ftol``,
    or when the bracket cannot shrink further in floating point.
    """
    f_lo, f_hi = f(lo), f(hi)
    if not f_lo > 0:
        raise InfeasibleError(f"key rate is not positive at {name}={lo!r} ({f_lo!r})")
    if not f_hi < 0:
        raise BracketError(f"key rate still positive at {name}={hi!r} ({f_hi!r}); widen the bracket")
    while True:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0 or mid in (lo, hi):
            return mid
        if hi - lo <= xtol and abs(f_mid) <= ftol:
            return mid
        if f_mid > 0:
            lo = mid
        else:
            hi = mid


def tolerance_v_laser(params: SystemParams, scenario: ScenarioKind,
                      bracket: Tuple[float, float] = (1e-6, 0.2),
                      xtol: float = 1e-6, ktol: float = 1e-9) -> float:
    """Largest V_laser that still leaves a positive key rate."""
    validate(params)

    def k(v):
        return key_rate_at(params, scenario, "v_laser", v).key_rate

    return bisect_root(k, bracket[0], bracket[1], xtol, ktol, name="v_laser")


def max_distance(params: SystemParams, scenario: ScenarioKind,
                 bracket_km: Tuple[float, float] = (0.0, 300.0), tol: float = 0.01,
                 ideal_calibration: bool = False) -> float:
    """Total distance D at which the key rate reaches zero."""
    validate(params)

    def k(d):
        return key_rate_at(params, scenario, "distance_km", d, ideal_calibration).key_rate

    return bisect_root(k, bracket_km[0], bracket_km[1], tol, name="distance_km")
