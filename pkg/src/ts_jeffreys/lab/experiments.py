from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterator, Sequence

import numpy as np
from scipy import stats

from ts_jeffreys.errors import ConfigError
from ts_jeffreys.families.base import ExponentialFamily, FloatArray
from ts_jeffreys.lab.events import qualifying_points
from ts_jeffreys.lab.geometry import c2_constant
from ts_jeffreys.lab.models import LabConfig, TailEstimate
from ts_jeffreys.posterior.conjugate import has_conjugate, sample_conjugate_many
from ts_jeffreys.posterior.metropolis import sample_mh
from ts_jeffreys.posterior.models import ArmPosterior

logger = logging.getLogger(__name__)

EstimateCallback = Callable[[TailEstimate], None]

BLOCK_ELEMENTS = 1_000_000
MIN_PASS_FRACTION = 0.10
RESOLVABLE_HITS = 10


def suffstat_tail_experiment(
    cfg: LabConfig, on_estimate: EstimateCallback | None = None
) -> list[TailEstimate]:
    """P(|mean of T over u draws − F'(θ)| >= δ) next to 2 exp(−u K̃(θ, δ))."""
    family, theta = cfg.family, cfg.theta
    rate = family.chernoff_rate(theta, cfg.delta)
    center = family.dlog_partition(theta)
    estimates = []
    for u, seq in zip(cfg.sample_sizes, _size_seeds(cfg), strict=True):
        rng = np.random.default_rng(seq)
        hits = 0
        for rows in _blocks(cfg.trials, u):
            ys = family.sample_rewards(theta, rng, rows * u).reshape(rows, u)
            means = family.suff_stats(ys).mean(axis=1)
            hits += int(np.count_nonzero(np.abs(means - center) >= cfg.delta))
        estimate = TailEstimate(
            u=u,
            empirical_prob=hits / cfg.trials,
            bound=2.0 * math.exp(-u * rate),
            trials_used=cfg.trials,
        )
        logger.debug("suff-stat tail %s", estimate)
        estimates.append(estimate)
        if on_estimate is not None:
            on_estimate(estimate)
    return estimates


def posterior_tail_experiment(
    cfg: LabConfig,
    on_estimate: EstimateCallback | None = None,
    *,
    force_mh: bool = False,
) -> list[TailEstimate]:
    """Mean posterior probability of μ(θ') > μ(θ) + Δ over datasets in the event.

    ``bound`` carries the decay rate (1 − δC₂) K(θ, μ⁻¹(μ + Δ)); the prefactor is
    not computed, so the comparison is made on slopes (see ``fit_decay_slope``).
    """
    if cfg.gap is None:
        raise ConfigError("the posterior tail experiment needs a gap Δ")
    family, theta = cfg.family, cfg.theta
    theta_gap = family.mean_inverse(family.mean(theta) + cfg.gap)
    rate = (1.0 - cfg.delta * c2_constant(family, theta, cfg.gap)) * family.kl(
        theta, theta_gap
    )
    floor = family.likelihood_floor(theta)
    use_mh = force_mh or not has_conjugate(family)

    estimates = []
    for u, seq in zip(cfg.sample_sizes, _size_seeds(cfg), strict=True):
        data_seq, post_seq = seq.spawn(2)
        data_rng = np.random.default_rng(data_seq)
        post_rng = np.random.default_rng(post_seq)
        kept = 0
        tail_sum = 0.0
        for rows in _blocks(cfg.trials, u):
            ys = family.sample_rewards(theta, data_rng, rows * u).reshape(rows, u)
            passed = qualifying_points(family, theta, cfg.delta, ys, floor).any(
                axis=1
            )
            for s in family.suff_stats(ys[passed]).sum(axis=1):
                draws = _posterior_draws(
                    family, ArmPosterior(u, float(s)), cfg, post_rng, use_mh
                )
                tail_sum += float(np.mean(draws > theta_gap))
                kept += 1

        fraction = kept / cfg.trials
        if fraction < MIN_PASS_FRACTION:
            raise ConfigError(
                f"only {fraction:.1%} of {cfg.trials} datasets of size {u} satisfy "
                f"the conditioning event (need {MIN_PASS_FRACTION:.0%}); "
                "use a larger δ"
            )
        estimate = TailEstimate(
            u=u,
            empirical_prob=tail_sum / kept,
            bound=rate,
            trials_used=kept,
            passed_fraction=fraction,
        )
        logger.debug("posterior tail %s", estimate)
        estimates.append(estimate)
        if on_estimate is not None:
            on_estimate(estimate)
    return estimates


def exceeds_chernoff_bound(estimate: TailEstimate) -> bool:
    """Empirical tail above bound + 3 √(bound / trials)."""
    slack = 3.0 * math.sqrt(estimate.bound / estimate.trials_used)
    return estimate.empirical_prob > estimate.bound + slack


def fit_decay_slope(estimates: Sequence[TailEstimate], samples: int) -> float:
    """Least-squares slope of −ln(tail) against u.

    Only tails of at least 10 / ``samples`` enter the fit, where ``samples`` is
    the number of Monte Carlo draws behind each estimate.
    """
    usable = [
        e for e in estimates if e.empirical_prob >= RESOLVABLE_HITS / samples
    ]
    if len(usable) < 2:
        raise ConfigError(
            f"need two tails >= {RESOLVABLE_HITS}/{samples} to fit a slope, "
            f"got {len(usable)}"
        )
    us = np.asarray([e.u for e in usable], dtype=np.float64)
    neg_log = -np.log([e.empirical_prob for e in usable])
    slope, _ = np.polyfit(us, neg_log, 1)
    return float(slope)


def bernoulli_exact_tail(u: int, delta: float) -> float:
    """P(|S/u − ½| >= δ) for S ~ Bin(u, ½)."""
    s = np.arange(u + 1)
    mask = np.abs(s / u - 0.5) >= delta
    return float(stats.binom.pmf(s[mask], u, 0.5).sum())


def _posterior_draws(
    family: ExponentialFamily,
    post: ArmPosterior,
    cfg: LabConfig,
    rng: np.random.Generator,
    use_mh: bool,
) -> FloatArray:
    if not use_mh:
        return sample_conjugate_many(family, post, rng, cfg.posterior_draws)
    return np.asarray(
        [sample_mh(family, post, cfg.mh, rng) for _ in range(cfg.posterior_draws)],
        dtype=np.float64,
    )


def _size_seeds(cfg: LabConfig) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(cfg.seed).spawn(len(cfg.sample_sizes))


def _blocks(trials: int, u: int) -> Iterator[int]:
    per_block = max(1, BLOCK_ELEMENTS // u)
    done = 0
    while done < trials:
        rows = min(per_block, trials - done)
        yield rows
        done += rows
