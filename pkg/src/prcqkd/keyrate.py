"""Asymptotic reverse-reconciliation key rate of the equivalent one-way
Gaussian channel under one-mode collective attacks."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .calibration import CalibrationNoise, calibration_noise
from .channel import EquivalentChannel, channel_noise, equivalent_channel, transmittance
from .errors import NumericalDomainError, UnphysicalStateError
from .params import SystemParams, validate

PHYS_TOL = 1e-9


@dataclass(frozen=True)
class CovarianceABC:
    """Standard form [[a I, c Z], [c Z, b I]] of the two-mode state, Z = diag(1, -1)."""

    a: float
    b: float
    c: float

    @property
    def det_block(self) -> float:
        """ab - c^2, the square root of the full determinant."""
        return self.a * self.b - self.c * self.c


@dataclass(frozen=True)
class KeyRateResult:
    i_ab: float
    lambda1: float
    lambda2: float
    lambda3: float
    chi_be: float
    key_rate: float
    plob: float
    channel: EquivalentChannel
    noise: CalibrationNoise
    cov: CovarianceABC

    @property
    def feasible(self) -> bool:
        return self.key_rate > 0


def check_physical(cov: CovarianceABC, tol: float = PHYS_TOL) -> CovarianceABC:
    """Raise :class:`UnphysicalStateError` unless ``cov`` obeys the uncertainty principle.

    Besides a, b >= 1 and ab - c^2 >= 1 this needs
    a^2 + b^2 - 2c^2 <= 1 + (ab - c^2)^2, i.e. the smaller symplectic
    eigenvalue is at least 1.
    """
    a, b, c = cov.a, cov.b, cov.c
    det = cov.det_block
    if a < 1 - tol or b < 1 - tol:
        raise UnphysicalStateError(f"diagonal below vacuum: a={a!r}, b={b!r}")
    if det < 1 - tol:
        raise UnphysicalStateError(f"ab - c^2 = {det!r} < 1")
    # a^2 + b^2 - 2c^2 - 1 - det^2 = (a-b)^2 + 2 det - 1 - det^2 = (a-b)^2 - (det-1)^2
    excess = (a - b) ** 2 - (det - 1) ** 2
    if excess > tol * max(1.0, (a - b) ** 2):
        raise UnphysicalStateError(f"covariance ({a!r}, {b!r}, {c!r}) violates the uncertainty relation")
    return cov


def covariance(v: float, eta: float, chi_t: float) -> CovarianceABC:
    """(a, b, c) = (V, eta (V + chi_t), sqrt(eta (V^2 - 1)))."""
    if v < 1:
        raise NumericalDomainError(f"V must be >= 1, got {v!r}")
    if not 0 < eta <= 1:
        raise NumericalDomainError(f"eta must lie in (0, 1], got {eta!r}")
    if chi_t < 0:
        raise NumericalDomainError(f"chi_t must be >= 0, got {chi_t!r}")
    cov = CovarianceABC(v, eta * (v + chi_t), math.sqrt(eta * (v * v - 1)))
    return check_physical(cov)


def mutual_information(cov: CovarianceABC) -> float:
    """Alice-Bob mutual information in bits per pulse (both quadratures)."""
    a, b, c = cov.a, cov.b, cov.c
    denom = a + 1 - c * c / (b + 1)
    if not denom > 0:
        raise NumericalDomainError(f"non-positive denominator {denom!r} in I_AB")
    return math.log2((a + 1) / denom)


def g_entropy(x: float) -> float:
    """Entropy G(x) = (x+1) log2(x+1) - x log2 x of a thermal state with mean photon number x."""
    if x < 0:
        raise NumericalDomainError(f"G(x) needs x >= 0, got {x!r}")
    if x == 0:
        return 0.0
    # log2(x+1) + x log2(1 + 1/x): same value, no cancellation at large x
    return math.log2(x + 1) + x * math.log1p(1 / x) / math.log(2)


def symplectic_spectrum(cov: CovarianceABC):
    """Return (lambda1, lambda2, lambda3).

    lambda1,2 are the symplectic eigenvalues of the two-mode matrix and
    lambda3 that of Alice's mode conditioned on Bob's heterodyne outcome.
    """
    a, b, c = cov.a, cov.b, cov.c
    det = cov.det_block
    d2 = (a - b) ** 2
    # A^2 - 4B^2 with A = a^2 + b^2 - 2c^2, B = det, factored to avoid cancellation
    disc = d2 * (d2 + 4 * det)
    if disc < 0:
        if disc < -PHYS_TOL:
            raise NumericalDomainError(f"negative discriminant {disc!r} in symplectic spectrum")
        disc = 0.0
    big_a = d2 + 2 * det
    l1_sq = 0.5 * (big_a + math.sqrt(disc))
    if not l1_sq > 0:
        raise NumericalDomainError(f"degenerate covariance ({a!r}, {b!r}, {c!r})")
    lambda1 = math.sqrt(l1_sq)
    # lambda1 * lambda2 = det exactly; this stays accurate near purity
    lambda2 = det / lambda1
    lambda3 = a - c * c / (b + 1)
    return lambda1, lambda2, lambda3


def _g_of(lam: float) -> float:
    x = (lam - 1) / 2
    if -PHYS_TOL <= x < 0:
        x = 0.0
    return g_entropy(x)


def holevo_bound(cov: CovarianceABC) -> float:
    """Eve's Holevo information on Bob's data, in bits per pulse."""
    l1, l2, l3 = symplectic_spectrum(cov)
    return _g_of(l1) + _g_of(l2) - _g_of(l3)


def plob_bound(t_total: float) -> float:
    """Repeaterless secret-key capacity -log2(1 - T) of a pure-loss channel."""
    if not 0 < t_total < 1:
        raise NumericalDomainError(f"PLOB bound needs T in (0, 1), got {t_total!r}")
    return -math.log1p(-t_total) / math.log(2)


def secret_key_rate(params: SystemParams, ideal_calibration: bool = False) -> KeyRateResult:
    """Full pipeline from physical parameters to the signed key rate.

    ``ideal_calibration`` drops the calibration excess noise and gives the
    reference curve for a perfect phase reference. A non-positive
    ``key_rate`` means no secret key.
    """
    p = validate(params)
    v = p.v_mod + 1
    t_a = transmittance(p.l_ac_km, p.loss_db_per_km)
    t_b = transmittance(p.l_bc_km, p.loss_db_per_km)
    noise = calibration_noise(p, channel_noise(t_a, p.eps_a), channel_noise(t_b, p.eps_b))
    eps = 0.0 if ideal_calibration else noise.eps_prc
    ch = equivalent_channel(t_a, t_b, p.eps_a, p.eps_b, v, eps)
    cov = covariance(v, ch.eta, ch.chi_t)
    i_ab = mutual_information(cov)
    l1, l2, l3 = symplectic_spectrum(cov)
    chi_be = _g_of(l1) + _g_of(l2) - _g_of(l3)
    t_total = transmittance(p.total_distance_km, p.loss_db_per_km)
    plob = math.inf if t_total >= 1 else plob_bound(t_total)
    return KeyRateResult(
        i_ab=i_ab,
        lambda1=l1,
        lambda2=l2,
        lambda3=l3,
        chi_be=chi_be,
        key_rate=p.beta * i_ab - chi_be,
        plob=plob,
        channel=ch,
        noise=noise,
        cov=cov,
    )
