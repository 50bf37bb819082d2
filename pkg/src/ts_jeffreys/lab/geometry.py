"""Geometry of the KL divergence around a fixed parameter.

Covers the C₂ constant, KL balls B_ε(θ) = {θ' : K(θ, θ') <= ε}, the Jeffreys
prior mass of those balls and the local quadratic behaviour of K.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from typing import NamedTuple

from scipy.integrate import quad

from ts_jeffreys.errors import DomainError
from ts_jeffreys.families.base import (
    ExponentialFamily,
    Interval,
    NaturalParam,
    solve_increasing,
)

logger = logging.getLogger(__name__)


class PriorMass(NamedTuple):
    u: int
    mass: float
    neg_log_mass: float


def c2_constant(family: ExponentialFamily, theta: NaturalParam, gap: float) -> float:
    """C₂ = [(F(θ_Δ) − F(θ)) / (θ_Δ − θ) − F'(θ)]⁻¹ with μ(θ_Δ) = μ(θ) + Δ."""
    family.check_theta(theta)
    if not gap > 0.0:
        raise DomainError(f"Δ must be positive, got {gap!r}")
    theta_gap = family.mean_inverse(family.mean(theta) + gap)
    chord = (family.log_partition(theta_gap) - family.log_partition(theta)) / (
        theta_gap - theta
    )
    slope_gap = chord - family.dlog_partition(theta)
    if not slope_gap > 0.0:
        raise DomainError(
            f"{family.kind}: chord gap {slope_gap!r} at θ={theta!r}, Δ={gap!r} "
            "is not positive (Δ too small for float precision)"
        )
    return 1.0 / slope_gap


def kl_ball(
    family: ExponentialFamily, theta: NaturalParam, eps: float
) -> tuple[float, float]:
    """Endpoints (a, b) of B_ε(θ), clamped to ``theta_domain`` when the ball
    escapes it."""
    family.check_theta(theta)
    if not eps > 0.0:
        raise DomainError(f"ε must be positive, got {eps!r}")
    dom = family.theta_domain
    left = _radius(family, theta, eps, -1.0, theta - dom.low)
    right = _radius(family, theta, eps, 1.0, dom.high - theta)
    return theta - left, theta + right


def _radius(
    family: ExponentialFamily,
    theta: NaturalParam,
    eps: float,
    direction: float,
    reach: float,
) -> float:
    def divergence(d: float) -> float:
        return family.kl(theta, theta + direction * d)

    try:
        return solve_increasing(divergence, eps, Interval(0.0, reach), 0.0)
    except DomainError:
        logger.debug(
            "%s: KL ball of radius %g around θ=%g clamped at the domain edge",
            family.kind,
            eps,
            theta,
        )
        return reach


def prior_ball_mass(
    family: ExponentialFamily, theta: NaturalParam, eps: float
) -> float:
    """∫ √F''(θ') dθ' over B_ε(θ) (unnormalized Jeffreys prior mass)."""
    a, b = kl_ball(family, theta, eps)
    mass, _ = quad(lambda t: math.sqrt(family.d2log_partition(t)), a, b)
    return float(mass)


def prior_mass_profile(
    family: ExponentialFamily, theta: NaturalParam, us: Iterable[int]
) -> list[PriorMass]:
    """Prior mass of B_{1/u²}(θ) for each u."""
    rows = []
    for u in us:
        mass = prior_ball_mass(family, theta, 1.0 / (u * u))
        rows.append(PriorMass(u, mass, -math.log(mass)))
    return rows


def kl_quadratic_ratio(
    family: ExponentialFamily, theta: NaturalParam, h: float
) -> float:
    """K(θ, θ + h) / h², which tends to F''(θ) / 2 as h -> 0."""
    return family.kl(theta, theta + h) / (h * h)
