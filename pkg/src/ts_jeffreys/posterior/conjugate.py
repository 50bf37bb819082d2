from __future__ import annotations

import math

import numpy as np
from scipy.special import logit

from ts_jeffreys.errors import PosteriorStateError
from ts_jeffreys.families.base import ExponentialFamily, FloatArray, NaturalParam
from ts_jeffreys.families.catalog import (
    Bernoulli,
    GammaShape,
    Gaussian,
    Pareto,
    Poisson,
    Weibull,
)
from ts_jeffreys.posterior.jeffreys import require_proper
from ts_jeffreys.posterior.models import ArmPosterior

_TINY = float(np.finfo(np.float64).tiny)


def sample_conjugate(
    family: ExponentialFamily, post: ArmPosterior, rng: np.random.Generator
) -> NaturalParam:
    """Exact draw of θ from the Jeffreys posterior."""
    return float(sample_conjugate_many(family, post, rng, 1)[0])


def sample_conjugate_many(
    family: ExponentialFamily,
    post: ArmPosterior,
    rng: np.random.Generator,
    size: int,
) -> FloatArray:
    """``size`` independent exact draws of θ from the Jeffreys posterior.

    Draws are made on λ (on u = λ^k for Weibull) and mapped back to θ. Draws on
    the boundary (λ underflow, Beta at 0 or 1) map to ±inf or the domain edge,
    which ``mean_unbounded`` handles.
    """
    require_proper(family, post)
    n, s = post.n, post.s
    with np.errstate(divide="ignore"):
        match family:
            case Bernoulli():
                return np.asarray(logit(rng.beta(0.5 + s, 0.5 + n - s, size)))
            case Gaussian(sigma2=sigma2):
                lam = rng.normal(s / n, math.sqrt(sigma2 / n), size)
                return np.asarray(lam / sigma2, dtype=np.float64)
            case GammaShape(k=k):
                lam = rng.gamma(k * n, 1.0 / _positive_rate(family, s), size)
                return -np.maximum(lam, _TINY)
            case Poisson():
                return np.log(rng.gamma(0.5 + s, 1.0 / n, size))
            case Pareto(xm=xm):
                rate = _positive_rate(family, s - n * math.log(xm))
                return -np.maximum(rng.gamma(n, 1.0 / rate, size), _TINY) - 1.0
            case Weibull():
                # u = λ^k ~ Gamma(n, s) and θ = −u.
                return -rng.gamma(n, 1.0 / _positive_rate(family, s), size)
            case _:
                raise PosteriorStateError(
                    f"no conjugate sampler for {family.kind}; use sample_mh"
                )


def has_conjugate(family: ExponentialFamily) -> bool:
    return isinstance(
        family, Bernoulli | Gaussian | GammaShape | Poisson | Pareto | Weibull
    )


def _positive_rate(family: ExponentialFamily, rate: float) -> float:
    if not rate > 0.0:
        raise PosteriorStateError(
            f"{family.kind} posterior rate must be positive, got {rate!r}"
        )
    return rate
