"""Monte Carlo simulation of the LO phase-calibration loop.

Used as an empirical check on the closed-form calibration noise. Each run
is split into fixed-size chunks, each drawing from its own child of one
``SeedSequence``; per-chunk sums are reduced in chunk order, so results do
not depend on how many workers evaluate the chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .calibration import eps_prc, laser_variance, v_measure
from .channel import channel_noise, transmittance
from .errors import ConfigError, NumericalDomainError
from .params import SystemParams, validate

CHUNK = 1 << 16


@dataclass(frozen=True)
class McConfig:
    n_pulses: int = 100_000
    seed: int = 0
    params: SystemParams = SystemParams()
    workers: int = 1

    def validate(self) -> "McConfig":
        bad = []
        if not (isinstance(self.n_pulses, int) and self.n_pulses >= 1):
            bad.append(("n_pulses", f"need an integer >= 1, got {self.n_pulses!r}"))
        if not (isinstance(self.seed, int) and self.seed >= 0):
            bad.append(("seed", f"need a non-negative integer, got {self.seed!r}"))
        if not (isinstance(self.workers, int) and self.workers >= 1):
            bad.append(("workers", f"need an integer >= 1, got {self.workers!r}"))
        if bad:
            raise ConfigError(bad)
        validate(self.params)
        return self


@dataclass(frozen=True)
class McReport:
    v_laser_hat: float
    v_prc_hat: float
    eps_prc_hat: float
    eps_prc_se: float
    n: int


def wrap_phase(x):
    """Map angles onto (-pi, pi]."""
    y = np.mod(x + np.pi, 2 * np.pi) - np.pi
    return np.where(y == -np.pi, np.pi, y)


def simulate_laser_drift(n: int, dnu_a: float, dnu_b: float, f: float, seed) -> np.ndarray:
    """Per-pulse increments of the relative phase of two free-running lasers.

    Lorentzian lasers diffuse in phase, so increments over one pulse period
    are i.i.d. N(0, 2 pi (dnu_A + dnu_B) / f).
    """
    if not f > 0:
        raise NumericalDomainError(f"repetition rate must be > 0, got {f!r}")
    if n < 1:
        raise NumericalDomainError(f"need n >= 1, got {n!r}")
    var = 2 * math.pi * (dnu_a + dnu_b) / f
    return _drift(np.random.default_rng(seed), n, var)


def _drift(rng, n, var):
    if var == 0:
        return np.zeros(n)
    return rng.normal(0.0, math.sqrt(var), n)


def _chunk_sums(seed_seq, n, v_laser, sigma_a, sigma_b):
    rng = np.random.default_rng(seed_seq)
    steps = _drift(rng, n, v_laser)
    # true LO phase difference at each calibration instant
    phi = wrap_phase(rng.uniform(-np.pi, np.pi) + np.cumsum(steps))
    # each LO's noise shifts the recovered quadrature pair independently
    noise = (
        sigma_a * rng.standard_normal((2, n))
        + sigma_b * rng.standard_normal((2, n))
    )
    x = np.cos(phi) + noise[0]
    p = np.sin(phi) + noise[1]
    phi_hat = np.arctan2(p, x)
    # the signal pulse that uses this estimate has drifted one more step
    residual = wrap_phase(phi - phi_hat + _drift(rng, n, v_laser))
    cos_r = np.cos(residual)
    return np.array([
        n,
        steps.sum(), np.square(steps).sum(),
        residual.sum(), np.square(residual).sum(),
        cos_r.sum(), np.square(cos_r).sum(),
    ])


def _variance(n, s1, s2):
    if n < 2:
        return 0.0
    return max(0.0, (s2 - s1 * s1 / n) / (n - 1))


def simulate_calibration(cfg: McConfig) -> McReport:
    """Simulate ``cfg.n_pulses`` calibrate-then-correct cycles.

    For each pulse the true phase difference follows the laser drift; the
    recovered quadratures (cos phi, sin phi) pick up Gaussian noise of
    variance (chi_A + 1)/|alpha_LO|^2 and (chi_B + 1)/|alpha_LO|^2 in each
    component; phi is estimated with atan2 and the next signal pulse carries
    the residual phi - phi_hat plus one further drift step.
    """
    cfg.validate()
    p = cfg.params
    vl = laser_variance(p)
    lo = p.lo_intensity
    chi_a = channel_noise(transmittance(p.l_ac_km, p.loss_db_per_km), p.eps_a)
    chi_b = channel_noise(transmittance(p.l_bc_km, p.loss_db_per_km), p.eps_b)
    sigma_a = math.sqrt((chi_a + 1) / lo)
    sigma_b = math.sqrt((chi_b + 1) / lo)

    sizes = [CHUNK] * (cfg.n_pulses // CHUNK)
    if cfg.n_pulses % CHUNK:
        sizes.append(cfg.n_pulses % CHUNK)
    children = np.random.SeedSequence(cfg.seed).spawn(len(sizes))
    jobs = [(s, m, vl, sigma_a, sigma_b) for s, m in zip(children, sizes)]
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            parts = list(pool.map(lambda j: _chunk_sums(*j), jobs))
    else:
        parts = [_chunk_sums(*j) for j in jobs]
    tot = np.zeros(7)
    for part in parts:
        tot += part
    n, d1, d2, r1, r2, c1, c2 = tot
    n = int(n)

    mean_cos = c1 / n
    se_cos = math.sqrt(_variance(n, c1, c2) / n)
    return McReport(
        v_laser_hat=float(_variance(n, d1, d2)),
        v_prc_hat=float(_variance(n, r1, r2)),
        eps_prc_hat=float(2 * p.v_mod * (1 - mean_cos)),
        eps_prc_se=float(2 * p.v_mod * se_cos),
        n=n,
    )


def analytic_reference(params: SystemParams) -> dict:
    """Closed-form values the simulation should reproduce."""
    p = validate(params)
    chi_a = channel_noise(transmittance(p.l_ac_km, p.loss_db_per_km), p.eps_a)
    chi_b = channel_noise(transmittance(p.l_bc_km, p.loss_db_per_km), p.eps_b)
    vl = laser_variance(p)
    v_prc = vl + v_measure(chi_a, chi_b, p.lo_intensity)
    return {
        "v_laser": vl,
        "v_prc": v_prc,
        "eps_prc_exact": eps_prc(p.v_mod, v_prc, "exact"),
        "eps_prc_approx": eps_prc(p.v_mod, v_prc, "approx"),
    }
