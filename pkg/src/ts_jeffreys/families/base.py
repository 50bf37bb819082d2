"""Canonical one-dimensional exponential families.

A family has densities ``p(x | θ) = A(x) exp(T(x) θ − F(θ))`` with respect to
Lebesgue or counting measure. Subclasses supply ``A``, ``T``, ``F`` and its first
two derivatives, the user-facing parametrization ``λ`` and a reward sampler; the
base class derives everything else (Bregman KL, Chernoff rates, root-finding).
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any, ClassVar

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import bisect

from ts_jeffreys.errors import DomainError

logger = logging.getLogger(__name__)

NaturalParam = float
FloatArray = NDArray[np.float64]

ROOT_XTOL = 1e-12
ROOT_MAXITER = 200
MODE_GRID_POINTS = 10_000
MODE_QUANTILE_TAIL = 5e-5


@dataclass(frozen=True)
class Interval:
    """Open interval ``(low, high)``; either end may be infinite."""

    low: float
    high: float

    def contains(self, x: float) -> bool:
        return self.low < x < self.high

    def clamp(self, x: float) -> float:
        return min(max(x, self.low), self.high)

    def __str__(self) -> str:
        return f"({self.low:g}, {self.high:g})"


def solve_increasing(
    fn: Callable[[float], float],
    target: float,
    domain: Interval,
    start: float,
) -> float:
    """Return ``x`` in ``domain`` with ``fn(x) == target`` for increasing ``fn``.

    The bracket grows geometrically from ``start``; towards a finite edge it
    halves the remaining distance instead, so every probe stays inside the
    domain. Raises DomainError when no sign change is found.
    """

    def objective(x: float) -> float:
        return fn(x) - target

    at_start = objective(start)
    if at_start == 0.0:
        return start
    upward = at_start < 0.0
    edge = domain.high if upward else domain.low
    direction = 1.0 if upward else -1.0

    previous = start
    for k in range(ROOT_MAXITER):
        if math.isinf(edge):
            candidate = start + direction * 2.0**k
        else:
            candidate = start + (edge - start) * (1.0 - 0.5 ** (k + 1))
        if not domain.contains(candidate):
            break
        value = objective(candidate)
        if (value >= 0.0) if upward else (value <= 0.0):
            lo, hi = (previous, candidate) if upward else (candidate, previous)
            root = bisect(objective, lo, hi, xtol=ROOT_XTOL, maxiter=ROOT_MAXITER)
            return float(root)
        previous = candidate

    raise DomainError(
        f"target {target!r} is not attained on {domain} (searched from {start!r})"
    )


class ExponentialFamily(ABC):
    """One-parameter canonical exponential family with known nuisance constants.

    ``natural_domain`` is where ``F`` is finite; ``theta_domain`` is the part of it
    with finite mean, used for environments. ``stat_domain`` is the range of
    ``F'`` (means of ``T(X)``) over the natural domain.
    """

    kind: ClassVar[str]
    support_description: ClassVar[str]
    discrete: ClassVar[bool] = False

    # --- per-family primitives ---

    @abstractmethod
    def log_partition(self, theta: float) -> float:
        """F(θ)."""

    @abstractmethod
    def dlog_partition(self, theta: float) -> float:
        """F'(θ) = E[T(X)]."""

    @abstractmethod
    def d2log_partition(self, theta: float) -> float:
        """F''(θ) = Var[T(X)]."""

    @abstractmethod
    def to_natural(self, lam: float) -> NaturalParam:
        """Map the conventional parameter λ to θ."""

    @abstractmethod
    def from_natural(self, theta: NaturalParam) -> float:
        """Map θ back to λ."""

    @abstractmethod
    def _mean(self, theta: float) -> float:
        """Closed-form mean; may return +inf outside ``theta_domain``."""

    @abstractmethod
    def _suff_stats(self, xs: FloatArray) -> FloatArray: ...

    @abstractmethod
    def _log_base_measure(self, xs: FloatArray) -> FloatArray: ...

    @abstractmethod
    def _in_support(self, xs: FloatArray) -> NDArray[np.bool_]: ...

    @abstractmethod
    def sample_rewards(
        self, theta: NaturalParam, rng: np.random.Generator, size: int
    ) -> FloatArray:
        """Draw ``size`` rewards from p(· | θ)."""

    @abstractmethod
    def frozen(self, theta: NaturalParam) -> Any:
        """The matching ``scipy.stats`` frozen distribution."""

    @abstractmethod
    def spec_string(self) -> str:
        """Text form accepted by ``parse_family``."""

    # --- domains ---

    @property
    @abstractmethod
    def natural_domain(self) -> Interval:
        """Where F is finite."""

    @property
    @abstractmethod
    def stat_domain(self) -> Interval:
        """Range of F' over the natural domain."""

    @property
    def theta_domain(self) -> Interval:
        return self.natural_domain

    @property
    @abstractmethod
    def mean_domain(self) -> Interval:
        """Attainable means over ``theta_domain``."""

    def check_theta(self, theta: float) -> None:
        if not self.theta_domain.contains(theta):
            raise DomainError(
                f"θ={theta!r} outside {self.kind} theta_domain {self.theta_domain}"
            )

    def check_natural(self, theta: float) -> None:
        if not self.natural_domain.contains(theta):
            raise DomainError(
                f"θ={theta!r} outside {self.kind} natural domain {self.natural_domain}"
            )

    def check_support(self, xs: ArrayLike) -> FloatArray:
        arr = np.asarray(xs, dtype=np.float64)
        inside = self._in_support(arr)
        if not np.all(inside):
            bad = arr[~inside]
            raise DomainError(
                f"observation {bad.flat[0]!r} outside {self.kind} support "
                f"{self.support_description}"
            )
        return arr

    # --- derived operations ---

    def log_density(self, theta: NaturalParam, x: float) -> float:
        return float(self.log_densities(theta, np.asarray([x]))[0])

    def log_densities(self, theta: NaturalParam, xs: ArrayLike) -> FloatArray:
        """ln A(x) + T(x) θ − F(θ), elementwise."""
        self.check_natural(theta)
        arr = self.check_support(xs)
        return self._log_base_measure(arr) + self._suff_stats(arr) * theta - (
            self.log_partition(theta)
        )

    def suff_stat(self, x: float) -> float:
        return float(self.suff_stats(np.asarray([x]))[0])

    def suff_stats(self, xs: ArrayLike) -> FloatArray:
        return self._suff_stats(self.check_support(xs))

    def mean(self, theta: NaturalParam) -> float:
        self.check_theta(theta)
        return float(self._mean(theta))

    def mean_unbounded(self, theta: NaturalParam) -> float:
        """Mean anywhere in the natural domain, +inf where it diverges."""
        if math.isnan(theta):
            raise DomainError("θ is NaN")
        return float(self._mean(theta))

    def mean_inverse(self, m: float) -> NaturalParam:
        if not self.mean_domain.contains(m):
            raise DomainError(
                f"mean {m!r} outside {self.kind} mean_domain {self.mean_domain}"
            )
        return self._mean_inverse(m)

    def _mean_inverse(self, m: float) -> NaturalParam:
        return self.mean_inverse_numeric(m)

    def mean_inverse_numeric(self, m: float) -> NaturalParam:
        """Invert the mean map by bisection; the fallback for families without
        a closed form."""
        dom = self.theta_domain
        start = dom.clamp(0.0)
        if not dom.contains(start):
            start = dom.high - 1.0 if math.isinf(dom.low) else dom.low + 1.0
        return solve_increasing(self._mean, m, dom, start)

    def stat_inverse(self, t: float) -> NaturalParam:
        """θ with F'(θ) = t, i.e. the maximizer of θ t − F(θ)."""
        if not self.stat_domain.contains(t):
            raise DomainError(
                f"statistic mean {t!r} outside {self.kind} range {self.stat_domain}"
            )
        return solve_increasing(
            self.dlog_partition, t, self.natural_domain, self.interior_point()
        )

    def interior_point(self) -> float:
        dom = self.natural_domain
        if dom.contains(0.0):
            return 0.0
        if math.isinf(dom.low):
            return dom.high - 1.0
        return dom.low + 1.0

    def kl(self, theta: NaturalParam, theta_prime: NaturalParam) -> float:
        """K(θ, θ') as the Bregman divergence of F between θ' and θ."""
        self.check_natural(theta)
        self.check_natural(theta_prime)
        if theta == theta_prime:
            return 0.0
        value = (
            self.log_partition(theta_prime)
            - self.log_partition(theta)
            - self.dlog_partition(theta) * (theta_prime - theta)
        )
        return max(value, 0.0)

    def fisher_info(self, theta: NaturalParam) -> float:
        self.check_natural(theta)
        return self.d2log_partition(theta)

    def chernoff_rate(self, theta: NaturalParam, delta: float) -> float:
        """min(K(θ + g, θ), K(θ − h, θ)) with F'(θ + g) = F'(θ) + δ and
        F'(θ − h) = F'(θ) − δ; unattainable branches are skipped."""
        if not delta > 0.0:
            raise DomainError(f"δ must be positive, got {delta!r}")
        self.check_natural(theta)
        center = self.dlog_partition(theta)
        rates: list[float] = []
        for target in (center + delta, center - delta):
            if not self.stat_domain.contains(target):
                logger.debug(
                    "%s: F'=%g unattainable at θ=%g, branch dropped",
                    self.kind,
                    target,
                    theta,
                )
                continue
            shifted = solve_increasing(
                self.dlog_partition, target, self.natural_domain, theta
            )
            rates.append(self.kl(shifted, theta))
        if not rates:
            raise DomainError(
                f"neither F'(θ)±δ is attainable for {self.kind} at θ={theta!r}, "
                f"δ={delta!r}"
            )
        return min(rates)

    def sample_reward(self, theta: NaturalParam, rng: np.random.Generator) -> float:
        return float(self.sample_rewards(theta, rng, 1)[0])

    def mode_density(self, theta: NaturalParam) -> float:
        """sup_y p(y | θ), by grid search over the central quantile range."""
        self.check_natural(theta)
        dist = self.frozen(theta)
        lo = float(dist.ppf(MODE_QUANTILE_TAIL))
        hi = float(dist.ppf(1.0 - MODE_QUANTILE_TAIL))
        if self.discrete:
            grid = np.arange(math.floor(lo), math.ceil(hi) + 1, dtype=np.float64)
        else:
            grid = np.linspace(lo, hi, MODE_GRID_POINTS)
        grid = grid[self._in_support(grid)]
        return float(np.exp(np.max(self.log_densities(theta, grid))))

    def likelihood_floor(self, theta: NaturalParam) -> float:
        """L(θ) = ½ min(sup_y p(y | θ), 1)."""
        return 0.5 * min(self.mode_density(theta), 1.0)

    def __str__(self) -> str:
        return self.spec_string()
