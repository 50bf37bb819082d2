"""Random-walk Metropolis sampler for Jeffreys posteriors on θ.

Each draw runs a fresh short chain started at the maximizer of θ s − n F(θ),
with Gaussian proposals scaled by the posterior curvature at that point.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from ts_jeffreys.errors import PosteriorStateError
from ts_jeffreys.families.base import ExponentialFamily, NaturalParam
from ts_jeffreys.posterior.jeffreys import log_prior_unnorm, require_proper
from ts_jeffreys.posterior.models import ArmPosterior, MhConfig

logger = logging.getLogger(__name__)

TARGET_ACCEPTANCE = (0.2, 0.5)


def sample_mh(
    family: ExponentialFamily,
    post: ArmPosterior,
    cfg: MhConfig,
    rng: np.random.Generator,
) -> NaturalParam:
    require_proper(family, post)
    theta = chain_start(family, post)
    curvature = max(post.n, 1) * family.d2log_partition(theta)
    scale = cfg.step_scale / math.sqrt(curvature)
    logp = _log_target(family, post, theta)
    if not math.isfinite(logp):
        raise PosteriorStateError(
            f"non-finite log posterior {logp!r} at chain start θ={theta!r}"
        )

    low, high = TARGET_ACCEPTANCE
    for round_ in range(cfg.max_adapt_rounds + 1):
        theta, logp, rate = _run_chain(family, post, theta, logp, scale, cfg, rng)
        if low <= rate <= high:
            break
        if round_ == cfg.max_adapt_rounds:
            logger.debug(
                "%s: acceptance %.3f outside target after %d rounds (scale %.3g)",
                family.kind,
                rate,
                round_ + 1,
                scale,
            )
            break
        scale = scale * 0.5 if rate < low else scale * 2.0
    return theta


def chain_start(family: ExponentialFamily, post: ArmPosterior) -> NaturalParam:
    """θ₀ = (F')⁻¹(s / n), with s / n pulled inside the range of F'."""
    if post.n == 0:
        return family.interior_point()
    dom = family.stat_domain
    t = post.mean_stat
    margin = 0.5 / (post.n + 1) * min(1.0, dom.high - dom.low)
    if t <= dom.low:
        t = dom.low + margin
    elif t >= dom.high:
        t = dom.high - margin
    return family.stat_inverse(t)


def _log_target(
    family: ExponentialFamily, post: ArmPosterior, theta: float
) -> float:
    if not family.natural_domain.contains(theta):
        return -math.inf
    try:
        return (
            log_prior_unnorm(family, theta)
            + theta * post.s
            - post.n * family.log_partition(theta)
        )
    except (OverflowError, ValueError):
        # F or ln F'' left floating-point range far out in the tails.
        return -math.inf


def _run_chain(
    family: ExponentialFamily,
    post: ArmPosterior,
    theta: float,
    logp: float,
    scale: float,
    cfg: MhConfig,
    rng: np.random.Generator,
) -> tuple[float, float, float]:
    steps = rng.standard_normal(cfg.burn_in) * scale
    log_u = np.log(rng.random(cfg.burn_in))
    accepted = 0
    for step, threshold in zip(steps, log_u, strict=True):
        proposal = theta + float(step)
        proposal_logp = _log_target(family, post, proposal)
        if math.isnan(proposal_logp) or proposal_logp == math.inf:
            raise PosteriorStateError(
                f"non-finite log posterior {proposal_logp!r} at θ={proposal!r}"
            )
        if proposal_logp - logp >= threshold:
            theta, logp = proposal, proposal_logp
            accepted += 1
    return theta, logp, accepted / cfg.burn_in
