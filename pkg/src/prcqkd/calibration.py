"""Phase-reference calibration: LO interference, phase recovery and the
excess noise left behind by an imperfect calibration."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalDomainError
from .params import EPS_PRC_MODES, SystemParams


@dataclass(frozen=True)
class CalibrationNoise:
    v_laser: float
    v_measure: float
    v_path: float
    v_prc: float
    eps_prc: float
    mode: str


def interference_intensities(theta_a, theta_b, lo_intensity):
    """Intensities at PD1 and PD2 for LO phases ``theta_a`` and ``theta_b``.

    PD2 sees the pi/2-shifted arm, so the pair is
    ``|alpha|^2 (1 + cos dphi)`` and ``|alpha|^2 (1 + sin dphi)``.
    Works elementwise on numpy arrays.
    """
    if not lo_intensity > 0:
        raise NumericalDomainError(f"LO intensity must be > 0, got {lo_intensity!r}")
    d = np.subtract(theta_a, theta_b)
    i1 = lo_intensity * (1 + np.cos(d))
    i2 = lo_intensity * (1 + np.sin(d))
    if np.ndim(i1) == 0:
        return float(i1), float(i2)
    return i1, i2


def phase_from_intensities(i1, i2, lo_intensity):
    """Recover theta_A - theta_B in (-pi, pi] from the two PD intensities.

    Noisy inputs off the unit circle are fine; atan2 only uses the direction.
    """
    if not lo_intensity > 0:
        raise NumericalDomainError(f"LO intensity must be > 0, got {lo_intensity!r}")
    x = np.asarray(i1, dtype=float) / lo_intensity - 1
    p = np.asarray(i2, dtype=float) / lo_intensity - 1
    if np.any((x == 0) & (p == 0)):
        raise NumericalDomainError("both recovered quadratures are zero; phase undefined")
    phi = np.arctan2(p, x)
    # atan2 may return -pi exactly; fold it onto +pi
    phi = np.where(phi == -np.pi, np.pi, phi)
    return float(phi) if phi.ndim == 0 else phi


def v_laser(dnu_a: float, dnu_b: float, f: float) -> float:
    """Relative phase drift variance 2 pi (dnu_A + dnu_B) / f, in rad^2."""
    if not f > 0:
        raise NumericalDomainError(f"repetition rate must be > 0, got {f!r}")
    if dnu_a < 0 or dnu_b < 0:
        raise NumericalDomainError("linewidths must be >= 0")
    return 2 * math.pi * (dnu_a + dnu_b) / f


def v_measure(chi_a: float, chi_b: float, lo_intensity: float) -> float:
    """LO phase measurement error (chi_A + chi_B + 2) / |alpha_LO|^2."""
    if not lo_intensity > 0:
        raise NumericalDomainError(f"LO intensity must be > 0, got {lo_intensity!r}")
    if chi_a < 0 or chi_b < 0:
        raise NumericalDomainError("added noise must be >= 0")
    return (chi_a + chi_b + 2) / lo_intensity


def eps_prc(v_mod: float, v_prc: float, mode: str = "approx") -> float:
    """Excess noise (SNU) from a Gaussian calibration phase error of variance ``v_prc``.

    ``exact`` gives 2 V_M (1 - exp(-V_prc/2)); ``approx`` is its first-order
    form V_M V_prc, which is never smaller.
    """
    if mode not in EPS_PRC_MODES:
        raise ConfigError([("eps_prc_mode", f"must be one of {EPS_PRC_MODES}, got {mode!r}")])
    if v_prc < 0:
        raise NumericalDomainError(f"phase variance must be >= 0, got {v_prc!r}")
    if not v_mod > 0:
        raise NumericalDomainError(f"modulation variance must be > 0, got {v_mod!r}")
    if mode == "exact":
        return -2 * v_mod * math.expm1(-v_prc / 2)
    return v_mod * v_prc


def laser_variance(params: SystemParams) -> float:
    """V_laser for ``params``: the override if set, else from linewidths."""
    if params.v_laser_override is not None:
        return params.v_laser_override
    return v_laser(params.linewidth_a_hz, params.linewidth_b_hz, params.rep_rate_hz)


def calibration_noise(params: SystemParams, chi_a: float, chi_b: float) -> CalibrationNoise:
    vl = laser_variance(params)
    vm = v_measure(chi_a, chi_b, params.lo_intensity)
    v_path = 0.0  # signal and LO share one optical path
    v_prc = vl + vm + v_path
    return CalibrationNoise(
        v_laser=vl,
        v_measure=vm,
        v_path=v_path,
        v_prc=v_prc,
        eps_prc=eps_prc(params.v_mod, v_prc, params.eps_prc_mode),
        mode=params.eps_prc_mode,
    )
