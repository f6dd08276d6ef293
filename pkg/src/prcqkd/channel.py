"""Reduction of the two relay channels plus Bob's displacement to an
equivalent one-way channel (eta, eps_c)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NumericalDomainError


@dataclass(frozen=True)
class EquivalentChannel:
    t_a: float
    t_b: float
    chi_a: float
    chi_b: float
    g_sq: float
    eta: float
    eps_c: float
    chi_t: float


def transmittance(length_km: float, loss_db_per_km: float = 0.2) -> float:
    if length_km < 0 or loss_db_per_km < 0:
        raise NumericalDomainError("length and loss must be >= 0")
    return 10 ** (-loss_db_per_km * length_km / 10)


def channel_noise(t: float, eps: float) -> float:
    """Channel added noise 1/T - 1 + eps, referred to the channel input."""
    if not 0 < t <= 1:
        raise NumericalDomainError(f"transmittance must lie in (0, 1], got {t!r}")
    if eps < 0:
        raise NumericalDomainError(f"excess noise must be >= 0, got {eps!r}")
    return 1 / t - 1 + eps


def optimal_gain_squared(v_b: float, t_b: float) -> float:
    """Displacement gain g^2 = 2 (V_B - 1) / (T_B (V_B + 1)) that minimises eps_c."""
    if not v_b > 1:
        raise NumericalDomainError(f"V_B must exceed 1 (no modulation otherwise), got {v_b!r}")
    if not 0 < t_b <= 1:
        raise NumericalDomainError(f"transmittance must lie in (0, 1], got {t_b!r}")
    return 2 * (v_b - 1) / (t_b * (v_b + 1))


def equivalent_excess_noise(t_a, t_b, eps_a, eps_b, v_b, g_sq=None, optimized=True):
    """Excess noise of the equivalent one-way channel.

    With ``optimized`` the closed form for the optimal gain is used and
    ``g_sq`` is ignored. Otherwise the general expression is evaluated at
    the supplied gain::

        1 + chi_A + (T_B/T_A)(chi_B - 1)
          + (T_B/T_A) (sqrt(2 (V_B - 1) / (T_B g^2)) - sqrt(V_B + 1))^2
    """
    for name, t in (("t_a", t_a), ("t_b", t_b)):
        if not 0 < t <= 1:
            raise NumericalDomainError(f"{name} must lie in (0, 1], got {t!r}")
    if not v_b > 1:
        raise NumericalDomainError(f"V_B must exceed 1, got {v_b!r}")
    if optimized:
        return (t_b / t_a) * (eps_b - 2) + eps_a + 2 / t_a
    if g_sq is None or not g_sq > 0:
        raise NumericalDomainError(f"g_sq must be > 0, got {g_sq!r}")
    chi_a = channel_noise(t_a, eps_a)
    chi_b = channel_noise(t_b, eps_b)
    r = t_b / t_a
    mismatch = math.sqrt(2 / (t_b * g_sq)) * math.sqrt(v_b - 1) - math.sqrt(v_b + 1)
    return 1 + chi_a + r * (chi_b - 1) + r * mismatch**2


def total_added_noise(eta: float, eps_c: float, eps_prc: float) -> float:
    """chi_t = 1/eta - 1 + eps_c + eps_prc."""
    if not 0 < eta <= 1:
        raise NumericalDomainError(f"eta must lie in (0, 1], got {eta!r}")
    if eps_c < 0 or eps_prc < 0:
        raise NumericalDomainError("noise terms must be >= 0")
    return 1 / eta - 1 + eps_c + eps_prc


def equivalent_channel(t_a, t_b, eps_a, eps_b, v, eps_prc):
    """Assemble the :class:`EquivalentChannel` at the optimal displacement gain.

    The relay must sit no nearer Alice than Bob (T_A <= T_B); otherwise eta
    can exceed 1 and the reduction no longer holds.
    """
    if t_a > t_b:
        raise NumericalDomainError(f"geometry with T_A={t_a!r} > T_B={t_b!r} is not supported")
    chi_a = channel_noise(t_a, eps_a)
    chi_b = channel_noise(t_b, eps_b)
    g_sq = optimal_gain_squared(v, t_b)
    eta = 0.5 * g_sq * t_a
    eps_c = equivalent_excess_noise(t_a, t_b, eps_a, eps_b, v)
    chi_t = total_added_noise(eta, eps_c, eps_prc)
    return EquivalentChannel(t_a, t_b, chi_a, chi_b, g_sq, eta, eps_c, chi_t)
