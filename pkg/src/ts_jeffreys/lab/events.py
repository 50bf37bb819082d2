"""The conditioning event on a dataset: one likely observation plus a
concentrated leave-one-out sufficient-statistic mean."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ts_jeffreys.families.base import ExponentialFamily, NaturalParam


def qualifying_points(
    family: ExponentialFamily,
    theta: NaturalParam,
    delta: float,
    datasets: ArrayLike,
    floor: float | None = None,
) -> NDArray[np.bool_]:
    """Mask of points y_s' (one dataset per row) that satisfy both conditions.

    A point qualifies when p(y_s' | θ) >= L(θ) and the mean of T over the other
    points of its row lies within δ of F'(θ). ``floor`` overrides L(θ) so batch
    callers compute it once.
    """
    ys = np.atleast_2d(family.check_support(datasets))
    u = ys.shape[1]
    if u < 2:
        return np.zeros(ys.shape, dtype=np.bool_)
    if floor is None:
        floor = family.likelihood_floor(theta)
    likely = np.exp(family.log_densities(theta, ys)) >= floor
    stats = family.suff_stats(ys)
    loo_means = (stats.sum(axis=1, keepdims=True) - stats) / (u - 1)
    close = np.abs(loo_means - family.dlog_partition(theta)) <= delta
    return np.asarray(likely & close, dtype=np.bool_)


def event_index(
    family: ExponentialFamily, theta: NaturalParam, delta: float, data: ArrayLike
) -> int | None:
    """First qualifying index s', or None (always None below two points)."""
    hits = np.flatnonzero(qualifying_points(family, theta, delta, data)[0])
    return int(hits[0]) if hits.size else None


def event_check(
    family: ExponentialFamily, theta: NaturalParam, delta: float, data: ArrayLike
) -> bool:
    return event_index(family, theta, delta, data) is not None


def unlikely_observation_probability(
    family: ExponentialFamily,
    theta: NaturalParam,
    draws: int,
    rng: np.random.Generator,
) -> float:
    """Monte Carlo estimate of P(p(Y | θ) < L(θ)) for Y ~ p(· | θ)."""
    ys = family.sample_rewards(theta, rng, draws)
    dens = np.exp(family.log_densities(theta, ys))
    return float(np.mean(dens < family.likelihood_floor(theta)))
