from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np
from numpy.typing import NDArray

from ts_jeffreys.bandit.models import (
    BanditInstance,
    KlUcb,
    PolicyKind,
    RegretTrace,
    TsJeffreys,
    Ucb1,
    Uniform,
)
from ts_jeffreys.bandit.policies import klucb_step, make_sampler, ts_step, ucb_step
from ts_jeffreys.bandit.streams import EpisodeStreams
from ts_jeffreys.errors import ConfigError
from ts_jeffreys.posterior.models import ArmPosterior

logger = logging.getLogger(__name__)

BatchCallback = Callable[[int, int], None]


def run_episode(
    instance: BanditInstance,
    policy: PolicyKind,
    horizon: int,
    seed: int,
    *,
    streams: EpisodeStreams | None = None,
) -> RegretTrace:
    """Play ``horizon`` rounds: each arm once, then ``policy`` decides.

    The k-th pull of arm ``a`` always receives the k-th reward of that arm's
    stream, so the trace is a pure function of (instance, policy, horizon, seed).
    """
    k = instance.n_arms
    if horizon < k:
        raise ConfigError(f"horizon T={horizon} is smaller than the arm count K={k}")
    if streams is None:
        streams = EpisodeStreams.from_seed(seed, k)

    reward_table = [
        family.sample_rewards(theta, rng, horizon)
        for (family, theta), rng in zip(instance.arms, streams.rewards, strict=True)
    ]
    stat_table = [
        family.suff_stats(rewards)
        for (family, _), rewards in zip(instance.arms, reward_table, strict=True)
    ]

    states = [ArmPosterior() for _ in range(k)]
    counts = np.zeros(k, dtype=np.int64)
    reward_sums = np.zeros(k, dtype=np.float64)
    chosen = np.empty(horizon, dtype=np.int64)
    rewards = np.empty(horizon, dtype=np.float64)
    sampler = make_sampler(policy) if isinstance(policy, TsJeffreys) else None

    arm: int
    for t in range(horizon):
        if t < k:
            arm = t
        else:
            match policy:
                case TsJeffreys():
                    assert sampler is not None
                    arm = ts_step(
                        instance,
                        states,
                        streams.policy,
                        arm_rngs=streams.posterior,
                        sampler=sampler,
                    )
                case Ucb1(exploration_c=c):
                    arm = ucb_step(
                        reward_sums / counts, counts, t + 1, streams.policy, c
                    )
                case KlUcb(horizon_aware=aware):
                    arm = klucb_step(
                        instance,
                        reward_sums / counts,
                        counts,
                        t + 1,
                        streams.policy,
                        horizon=horizon if aware else None,
                    )
                case Uniform():
                    arm = int(streams.policy.integers(k))

        pull = int(counts[arm])
        x = float(reward_table[arm][pull])
        states[arm] = states[arm].observe(float(stat_table[arm][pull]))
        counts[arm] += 1
        reward_sums[arm] += x
        chosen[t] = arm
        rewards[t] = x

    trace = RegretTrace(
        horizon=horizon,
        chosen=chosen,
        rewards=rewards,
        pulls=counts,
        cum_pseudo_regret=pseudo_regret(chosen, instance.gaps),
        seed=seed,
    )
    logger.debug(
        "episode seed=%d T=%d pulls=%s regret=%.6g",
        seed,
        horizon,
        counts.tolist(),
        trace.final_regret,
    )
    return trace


def pseudo_regret(
    chosen: NDArray[np.int64], gaps: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Σ_a gap_a N_{a,t} for every round t, from running pull counts.

    Accumulating per arm (not per round) keeps the last entry bit-identical to
    Σ_a gap_a N_{a,T} summed in arm order.
    """
    regret = np.zeros(chosen.shape[0], dtype=np.float64)
    for a, gap in enumerate(gaps):
        regret = regret + np.cumsum(chosen == a, dtype=np.int64) * gap
    return regret


def lai_robbins_coefficient(instance: BanditInstance) -> float:
    """Σ_{a ≠ a*} (μ* − μ_a) / K(θ_a, θ*), the optimal regret / ln T constant."""
    if not instance.single_family:
        kinds = sorted({str(family) for family, _ in instance.arms})
        raise ConfigError(
            f"Lai-Robbins coefficient needs a single family, got {', '.join(kinds)}"
        )
    best = instance.best_arm
    theta_star = instance.arms[best][1]
    gaps = instance.gaps
    total = 0.0
    for a, (family, theta) in enumerate(instance.arms):
        if a == best:
            continue
        total += float(gaps[a]) / family.kl(theta, theta_star)
    return total


def run_batch(
    instance: BanditInstance,
    policy: PolicyKind,
    horizon: int,
    seeds: Sequence[int],
    workers: int = 1,
    on_done: BatchCallback | None = None,
) -> list[RegretTrace]:
    """Run one episode per seed; traces come back in ``seeds`` order."""
    episode = partial(run_episode, instance, policy, horizon)
    traces: list[RegretTrace] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for trace in pool.map(episode, seeds):
                traces.append(trace)
                if on_done is not None:
                    on_done(len(traces), len(seeds))
    else:
        for seed in seeds:
            traces.append(episode(seed))
            if on_done is not None:
                on_done(len(traces), len(seeds))
    return traces
