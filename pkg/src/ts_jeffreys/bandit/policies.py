from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from typing import Protocol

import numpy as np
from numpy.typing import NDArray

from ts_jeffreys.bandit.models import BanditInstance, TsJeffreys
from ts_jeffreys.errors import DomainError, PosteriorStateError
from ts_jeffreys.families.base import (
    ExponentialFamily,
    Interval,
    NaturalParam,
    solve_increasing,
)
from ts_jeffreys.posterior.conjugate import sample_conjugate
from ts_jeffreys.posterior.metropolis import sample_mh
from ts_jeffreys.posterior.models import ArmPosterior, MhConfig

logger = logging.getLogger(__name__)

MEAN_CLAMP = 1e-9


class PosteriorSampler(Protocol):
    def __call__(
        self,
        family: ExponentialFamily,
        post: ArmPosterior,
        rng: np.random.Generator,
    ) -> NaturalParam: ...


class MhSampler:
    def __init__(self, cfg: MhConfig) -> None:
        self._cfg = cfg

    def __call__(
        self,
        family: ExponentialFamily,
        post: ArmPosterior,
        rng: np.random.Generator,
    ) -> NaturalParam:
        return sample_mh(family, post, self._cfg, rng)


def make_sampler(policy: TsJeffreys) -> PosteriorSampler:
    if policy.sampler == "mh":
        return MhSampler(policy.mh)
    return sample_conjugate


def argmax_random_tie(values: NDArray[np.float64], rng: np.random.Generator) -> int:
    """Index of the largest value; ties are broken uniformly with ``rng``.

    ``rng`` is only consumed when a tie actually occurs.
    """
    best = np.flatnonzero(values == values.max())
    if best.size == 1:
        return int(best[0])
    return int(rng.choice(best))


def ts_step(
    instance: BanditInstance,
    states: Sequence[ArmPosterior],
    rng: np.random.Generator,
    *,
    arm_rngs: Sequence[np.random.Generator] | None = None,
    sampler: PosteriorSampler = sample_conjugate,
) -> int:
    """One Thompson Sampling decision: draw θ per arm, play argmax μ(θ).

    Draws for arm ``a`` come from ``arm_rngs[a]`` when given, else from ``rng``;
    ``rng`` also breaks ties. Means of draws outside the finite-mean region
    (Pareto λ <= 1) count as +inf.
    """
    sampled = np.empty(instance.n_arms, dtype=np.float64)
    for a, ((family, _), post) in enumerate(zip(instance.arms, states, strict=True)):
        draw_rng = rng if arm_rngs is None else arm_rngs[a]
        try:
            theta = sampler(family, post, draw_rng)
        except PosteriorStateError as e:
            raise PosteriorStateError(
                f"arm {a} sampled before initialization completed: {e}"
            ) from e
        sampled[a] = family.mean_unbounded(theta)
    return argmax_random_tie(sampled, rng)


def ucb_step(
    means: NDArray[np.float64],
    counts: NDArray[np.int64],
    t: int,
    rng: np.random.Generator,
    exploration_c: float = 1.0,
) -> int:
    """UCB1: empirical mean + c √(2 ln t / N_a)."""
    bonus = exploration_c * np.sqrt(2.0 * math.log(t) / counts)
    return argmax_random_tie(means + bonus, rng)


def klucb_index(
    family: ExponentialFamily, empirical_mean: float, n: int, budget: float
) -> float:
    """sup{m : n K(μ⁻¹(mean), μ⁻¹(m)) <= budget}, found by bisection in m."""
    dom = family.mean_domain
    m0 = _clamp_open(dom, empirical_mean)
    if budget <= 0.0:
        return m0
    theta0 = family.mean_inverse(m0)

    def divergence(m: float) -> float:
        return n * family.kl(theta0, family.mean_inverse(m))

    try:
        return solve_increasing(divergence, budget, Interval(m0, dom.high), m0)
    except DomainError:
        # The divergence stays below budget all the way to the edge of the
        # mean domain (Pareto as λ -> 1).
        logger.debug("%s: KL-UCB index unbounded at mean %g", family.kind, m0)
        return dom.high


def klucb_step(
    instance: BanditInstance,
    means: NDArray[np.float64],
    counts: NDArray[np.int64],
    t: int,
    rng: np.random.Generator,
    horizon: int | None = None,
) -> int:
    budget = math.log(horizon if horizon is not None else t)
    indices = np.asarray(
        [
            klucb_index(family, float(m), int(n), budget)
            for (family, _), m, n in zip(instance.arms, means, counts, strict=True)
        ],
        dtype=np.float64,
    )
    return argmax_random_tie(indices, rng)


def _clamp_open(dom: Interval, m: float) -> float:
    low, high = dom.low, dom.high
    if math.isfinite(low):
        low += MEAN_CLAMP * max(1.0, abs(low))
    if math.isfinite(high):
        high -= MEAN_CLAMP * max(1.0, abs(high))
    return min(max(m, low), high)
