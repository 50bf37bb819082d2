"""Jeffreys prior and posterior densities on the natural parameter.

π(θ | y₁..yₙ) ∝ √F''(θ) exp(θ s − n F(θ)) with s = Σ T(yᵢ).
"""

from __future__ import annotations

import math

from ts_jeffreys.errors import PosteriorStateError
from ts_jeffreys.families.base import ExponentialFamily, NaturalParam
from ts_jeffreys.families.catalog import Bernoulli
from ts_jeffreys.posterior.models import ArmPosterior


def properness_threshold(family: ExponentialFamily) -> int:
    """Smallest observation count making the Jeffreys posterior integrable.

    Only the Bernoulli prior Beta(½, ½) is proper; every other family here
    needs one observation.
    """
    return 0 if isinstance(family, Bernoulli) else 1


def require_proper(family: ExponentialFamily, post: ArmPosterior) -> None:
    threshold = properness_threshold(family)
    if post.n < threshold:
        raise PosteriorStateError(
            f"posterior improper: {family.kind} needs n >= {threshold}, has n={post.n}"
        )


def log_prior_unnorm(family: ExponentialFamily, theta: NaturalParam) -> float:
    return 0.5 * math.log(family.fisher_info(theta))


def log_posterior_unnorm(
    family: ExponentialFamily, post: ArmPosterior, theta: NaturalParam
) -> float:
    require_proper(family, post)
    return (
        log_prior_unnorm(family, theta)
        + theta * post.s
        - post.n * family.log_partition(theta)
    )
