"""Named parameter sets that regenerate each key-rate figure as a
multi-series table."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Dict, List, Tuple

import numpy as np

from .analysis import key_rate_at
from .channel import transmittance
from .keyrate import plob_bound
from .params import ScenarioKind, SystemParams

V_LASERS = (0.005, 0.01, 0.02)


@dataclass
class Table:
    name: str
    axis: str
    columns: List[str]
    rows: List[Tuple[float, ...]]
    description: str = ""

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows])


# series: column name -> (params, scenario, ideal_calibration)
Series = Dict[str, Tuple[SystemParams, ScenarioKind, bool]]


def _table(name, axis, grid, series: Series, description, plob=False):
    cols = [axis] + list(series)
    if plob:
        cols.append("plob")
    rows = []
    for x in grid:
        x = float(x)
        row = [x]
        for p, sc, ideal in series.values():
            row.append(key_rate_at(p, sc, axis, x, ideal).key_rate)
        if plob:
            t = transmittance(x, SystemParams().loss_db_per_km)
            row.append(math.inf if t >= 1 else plob_bound(t))
        rows.append(tuple(row))
    return Table(name, axis, cols, rows, description)


def fig4() -> Table:
    base = SystemParams(v_laser_override=0.005)
    series = {}
    for d in (10, 20, 30):
        sc = ScenarioKind("extreme_asymmetric", d)
        series[f"D{d}_imperfect"] = (base, sc, False)
        series[f"D{d}_ideal"] = (base, sc, True)
    return _table("fig4", "v_mod", np.linspace(1, 40, 79), series,
                  "key rate vs V_M, relay at Bob, D = 10/20/30 km")


def _distance(name, kind, v_mod, grid, description):
    base = SystemParams(v_mod=v_mod)
    sc = ScenarioKind(kind)
    series = {f"vlaser_{v:g}": (base.with_v_laser(v), sc, False) for v in V_LASERS}
    series["ideal"] = (base, sc, True)
    return _table(name, "distance_km", grid, series, description, plob=True)


def fig5() -> Table:
    return _distance("fig5", "extreme_asymmetric", 6.0, np.linspace(0, 100, 201),
                     "key rate vs distance, relay at Bob, V_M = 6")


def _v_laser(name, kind, v_mod, d, description):
    base = SystemParams(v_mod=v_mod)
    series = {
        f"D{d:g}_lo1e{round(math.log10(lo))}": (replace(base, lo_ratio=lo), ScenarioKind(kind, d), False)
        for lo in (1e8, 1e3, 1e2)
    }
    series["D0_lo1e8"] = (base, ScenarioKind(kind, 0.0), False)
    return _table(name, "v_laser", np.linspace(0, 0.05, 101), series, description)


def fig6() -> Table:
    return _v_laser("fig6", "extreme_asymmetric", 6.0, 20,
                    "key rate vs V_laser, relay at Bob, V_M = 6")


def fig7() -> Table:
    base = SystemParams(v_laser_override=0.005)
    series = {}
    for d in (2, 3, 4):
        sc = ScenarioKind("symmetric", d)
        series[f"D{d}_imperfect"] = (base, sc, False)
        series[f"D{d}_ideal"] = (base, sc, True)
    return _table("fig7", "v_mod", np.linspace(1, 40, 79), series,
                  "key rate vs V_M, relay midway, D = 2/3/4 km")


def fig8() -> Table:
    return _distance("fig8", "symmetric", 12.0, np.linspace(0, 6, 121),
                     "key rate vs distance, relay midway, V_M = 12")


def fig9() -> Table:
    return _v_laser("fig9", "symmetric", 12.0, 3,
                    "key rate vs V_laser, relay midway, V_M = 12")


PRESETS = {f.__name__: f for f in (fig4, fig5, fig6, fig7, fig8, fig9)}
