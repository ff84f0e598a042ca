"""Closed-form perturbation bounds for ``A = lam * a^{(x)m} + E``.

Every function takes ``beta_E``, an upper bound on ``beta(E)``.  The exact
``beta(E)`` is not computable in general; :func:`symrank1.tensor.beta_hat`
gives a valid (crude) value and :func:`symrank1.tensor.beta_estimate` a
bracket.  A looser ``beta_E`` only makes the bounds more conservative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Reference thresholds quoted for the n=100, m=4, beta_hat(E)=0.03 experiment.
REFERENCE_ALPHA_PRINCIPAL = -0.3365
REFERENCE_ALPHA_SPURIOUS = 1.015


@dataclass(frozen=True)
class NoiseModelParams:
    lam: float
    m: int
    n: int
    beta_E: float

    def __post_init__(self):
        if self.beta_E < 0:
            raise ValueError("beta_E must be non-negative")
        if self.m < 3:
            raise ValueError("m must be >= 3")


@dataclass(frozen=True)
class PrincipalBounds:
    """Interval for ``|lam_p|`` and lower bound on ``|cos(theta)|^m``.

    ``vacuous`` is set when ``cos_m_lo <= 0``; the value is kept as computed.
    """

    lambda_lo: float
    lambda_hi: float
    cos_m_lo: float
    m: int

    @property
    def vacuous(self) -> bool:
        return self.cos_m_lo <= 0

    def contains(self, lam_p: float, cos_theta: float, slack: float = 0.0) -> bool:
        in_interval = self.lambda_lo - slack <= abs(lam_p) <= self.lambda_hi + slack
        if self.vacuous:
            return in_interval
        return in_interval and abs(cos_theta) ** self.m >= self.cos_m_lo - slack


def thm1_bounds(p: NoiseModelParams) -> PrincipalBounds:
    """Principal eigenvalue interval and angle bound."""
    if p.lam == 0:
        raise ValueError("lam must be nonzero")
    lam = abs(p.lam)
    half = p.beta_E / (p.m - 1)
    return PrincipalBounds(lam - half, lam + half, 1 - 2 * p.beta_E / (lam * (p.m - 1)), p.m)


def thm2_threshold(p: NoiseModelParams, epsilon: float) -> float:
    """Rayleigh magnitude ``epsilon^m + beta_E/(m-1)`` that certifies ``|a.x| >= epsilon``."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    return epsilon**p.m + p.beta_E / (p.m - 1)


def thm2_check(p: NoiseModelParams, rayleigh_value: float, epsilon: float) -> bool:
    """True when ``|rayleigh_value|`` certifies ``|a.x| >= epsilon``.

    False means no certificate, not that the alignment is small.
    """
    return abs(rayleigh_value) >= thm2_threshold(p, epsilon)


def thm3_tail(n: int, epsilon: float) -> float:
    """Chebyshev bound ``min(1, 1/(n eps^2))`` on ``Pr(|a.x| > eps)`` for uniform unit ``x``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    return min(1.0, 1.0 / (n * epsilon**2))


def thm4_alpha_min(p: NoiseModelParams, lambda_p: float, sin_theta: float, cos_theta: float) -> float:
    """Shift above which a negative-stable pair ``(x, lambda_p)`` at angle theta to ``a`` is stable."""
    if abs(sin_theta**2 + cos_theta**2 - 1) > 1e-9:
        raise ValueError("sin_theta^2 + cos_theta^2 must equal 1")
    tilt = abs(sin_theta * cos_theta ** (p.m - 2))
    return (-lambda_p + (p.m - 1) * p.lam * tilt + p.beta_E) / 2


def max_tilt(m: int) -> float:
    """``max_theta |sin(theta) cos(theta)^(m-2)|``, attained at ``tan^2(theta) = 1/(m-2)``."""
    if m == 2:
        return 1.0
    s2 = 1.0 / (m - 1)
    return math.sqrt(s2) * (1 - s2) ** ((m - 2) / 2)


def thm4_principal_worst_case(p: NoiseModelParams) -> float:
    """Principal-pair threshold with the least favourable values the first bound allows.

    Takes ``lambda_p = lambda_lo`` and the largest admissible angle
    (``cos^m = cos_m_lo``).  ``sin cos^(m-2)`` is increasing on that range as
    long as the angle stays below ``atan(1/sqrt(m-2))``; beyond it the
    maximum over the range is used.
    """
    b = thm1_bounds(p)
    if b.vacuous:
        cos_t = 0.0
    else:
        cos_t = min(1.0, b.cos_m_lo) ** (1.0 / p.m)
    sin_t = math.sqrt(max(0.0, 1 - cos_t**2))
    tilt = abs(sin_t * cos_t ** (p.m - 2))
    if p.m > 2 and sin_t**2 > 1.0 / (p.m - 1):
        tilt = max_tilt(p.m)
    return (-b.lambda_lo + (p.m - 1) * abs(p.lam) * tilt + p.beta_E) / 2


def thm4_principal_at(p: NoiseModelParams, lambda_p: float, theta: float) -> float:
    """Principal-pair threshold from a measured eigenvalue and angle."""
    return thm4_alpha_min(p, lambda_p, math.sin(theta), math.cos(theta))


def thm4_spurious_envelope(p: NoiseModelParams) -> float:
    """Spurious-pair threshold: ``lambda_p = 0`` and the angle maximizing ``sin cos^(m-2)``."""
    return ((p.m - 1) * abs(p.lam) * max_tilt(p.m) + p.beta_E) / 2


def thm4_spurious_crude(p: NoiseModelParams) -> float:
    """Spurious-pair threshold using ``|sin cos^(m-2)| <= 1`` and ``lambda_p = lam``.

    Equals ``lam (m/2 - 1) + beta_E / 2``.
    """
    return (-abs(p.lam) + (p.m - 1) * abs(p.lam) + p.beta_E) / 2


def rank_one_step_alignment(lam: float, gamma: float, alpha: float, m: int) -> float:
    """``a . x_2`` after one SS-HOPM step on ``lam * a^{(x)m}`` from ``x_1`` with ``a . x_1 = gamma``."""
    delta2 = 1 - gamma**2
    num = lam * gamma ** (m - 1) + alpha * gamma
    return num / math.sqrt(num**2 + alpha**2 * delta2)


def thm5_alpha_min(lam: float, gamma: float, m: int) -> float:
    """``-lam gamma^(m-2) / 2``: any larger shift strictly improves ``|a.x|`` on a rank-one tensor."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    g = gamma ** (m - 2)
    if not g > 0:
        raise ValueError("requires gamma^(m-2) > 0")
    return -lam * g / 2


def thm6_alpha_min(p: NoiseModelParams) -> float:
    """Shift ``beta_E`` above which SS-HOPM is monotone and convergent (even ``m``, ``lam > 0``)."""
    if p.m % 2:
        raise ValueError("requires an even mode count")
    if not p.lam > 0:
        raise ValueError("requires lam > 0")
    return p.beta_E


def all_bounds(p: NoiseModelParams, epsilon: float = 0.9, gamma: float = 1.0,
               rayleigh_value: float | None = None) -> dict:
    """Every bound for one parameter set, as a flat dict."""
    b = thm1_bounds(p)
    out = {
        "lambda": p.lam, "m": p.m, "n": p.n, "beta_E": p.beta_E,
        "thm1_lambda_lo": b.lambda_lo,
        "thm1_lambda_hi": b.lambda_hi,
        "thm1_cos_m_lo": b.cos_m_lo,
        "thm1_vacuous": b.vacuous,
        "thm2_epsilon": epsilon,
        "thm2_threshold": thm2_threshold(p, epsilon),
        "thm3_tail": thm3_tail(p.n, epsilon),
        "thm4_principal_limit": -abs(p.lam) / 2,
        "thm4_principal_worst_case": thm4_principal_worst_case(p),
        "thm4_principal_lambda_p_eq_lambda": thm4_principal_at(
            p, abs(p.lam), math.pi / 2 if b.vacuous else math.acos(min(1.0, b.cos_m_lo) ** (1 / p.m))),
        "thm4_spurious_limit": abs(p.lam) * (p.m / 2 - 1),
        "thm4_spurious_crude": thm4_spurious_crude(p),
        "thm4_spurious_envelope": thm4_spurious_envelope(p),
        "reference_alpha_principal": REFERENCE_ALPHA_PRINCIPAL,
        "reference_alpha_spurious": REFERENCE_ALPHA_SPURIOUS,
    }
    if rayleigh_value is not None:
        out["thm2_rayleigh"] = rayleigh_value
        out["thm2_certified"] = thm2_check(p, rayleigh_value, epsilon)
    if p.lam > 0 and gamma ** (p.m - 2) > 0:
        out["thm5_gamma"] = gamma
        out["thm5_alpha_min"] = thm5_alpha_min(p.lam, gamma, p.m)
    if p.m % 2 == 0 and p.lam > 0:
        out["thm6_alpha_min"] = thm6_alpha_min(p)
    return out
