from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, ClassVar

import numpy as np
from numpy.typing import NDArray
from scipy import stats
from scipy.special import expit, gammaln, logit, xlogy

from ts_jeffreys.errors import DomainError
from ts_jeffreys.families.base import (
    ExponentialFamily,
    FloatArray,
    Interval,
    NaturalParam,
)

_INF = math.inf
_REALS = Interval(-_INF, _INF)
_NEGATIVE = Interval(-_INF, 0.0)
_POSITIVE = Interval(0.0, _INF)


def _require_positive(name: str, value: float) -> None:
    if not (value > 0.0 and math.isfinite(value)):
        raise DomainError(f"{name} must be a positive real, got {value!r}")


@dataclass(frozen=True)
class Bernoulli(ExponentialFamily):
    kind: ClassVar[str] = "bernoulli"
    support_description: ClassVar[str] = "{0, 1}"
    discrete: ClassVar[bool] = True

    @property
    def natural_domain(self) -> Interval:
        return _REALS

    @property
    def stat_domain(self) -> Interval:
        return Interval(0.0, 1.0)

    @property
    def mean_domain(self) -> Interval:
        return Interval(0.0, 1.0)

    def log_partition(self, theta: float) -> float:
        return float(np.logaddexp(0.0, theta))

    def dlog_partition(self, theta: float) -> float:
        return float(expit(theta))

    def d2log_partition(self, theta: float) -> float:
        p = float(expit(theta))
        return p * (1.0 - p)

    def to_natural(self, lam: float) -> NaturalParam:
        if not 0.0 < lam < 1.0:
            raise DomainError(f"Bernoulli λ must lie in (0, 1), got {lam!r}")
        return float(logit(lam))

    def from_natural(self, theta: NaturalParam) -> float:
        return float(expit(theta))

    def _mean(self, theta: float) -> float:
        return float(expit(theta))

    def _mean_inverse(self, m: float) -> NaturalParam:
        return float(logit(m))

    def _suff_stats(self, xs: FloatArray) -> FloatArray:
        return xs

    def _log_base_measure(self, xs: FloatArray) -> FloatArray:
        return np.zeros_like(xs)

    def _in_support(self, xs: FloatArray) -> NDArray[np.bool_]:
        return (xs == 0.0) | (xs == 1.0)

    def sample_rewards(
        self, theta: NaturalParam, rng: np.random.Generator, size: int
    ) -> FloatArray:
        return (rng.random(size) < expit(theta)).astype(np.float64)

    def frozen(self, theta: NaturalParam) -> Any:
        return stats.bernoulli(float(expit(theta)))

    def mode_density(self, theta: NaturalParam) -> float:
        self.check_natural(theta)
        p = float(expit(theta))
        return max(p, 1.0 - p)

    def spec_string(self) -> str:
        return self.kind


@dataclass(frozen=True)
class Gaussian(ExponentialFamily):
    """Normal rewards with known variance; θ = λ / σ²."""

    sigma2: float = 1.0

    kind: ClassVar[str] = "gaussian"
    support_description: ClassVar[str] = "the real line"

    def __post_init__(self) -> None:
        _require_positive("sigma2", self.sigma2)

    @property
    def natural_domain(self) -> Interval:
        return _REALS

    @property
    def stat_domain(self) -> Interval:
        return _REALS

    @property
    def mean_domain(self) -> Interval:
        return _REALS

    def log_partition(self, theta: float) -> float:
        return 0.5 * self.sigma2 * theta * theta

    def dlog_partition(self, theta: float) -> float:
        return self.sigma2 * theta

    def d2log_partition(self, theta: float) -> float:
        return self.sigma2

    def to_natural(self, lam: float) -> NaturalParam:
        if not math.isfinite(lam):
            raise DomainError(f"Gaussian λ must be finite, got {lam!r}")
        return lam / self.sigma2

    def from_natural(self, theta: NaturalParam) -> float:
        return self.sigma2 * theta

    def _mean(self, theta: float) -> float:
        return self.sigma2 * theta

    def _mean_inverse(self, m: float) -> NaturalParam:
        return m / self.sigma2

    def _suff_stats(self, xs: FloatArray) -> FloatArray:
        return xs

    def _log_base_measure(self, xs: FloatArray) -> FloatArray:
        return -(xs * xs) / (2.0 * self.sigma2) - 0.5 * math.log(
            2.0 * math.pi * self.sigma2
        )

    def _in_support(self, xs: FloatArray) -> NDArray[np.bool_]:
        return np.isfinite(xs)

    def sample_rewards(
        self, theta: NaturalParam, rng: np.random.Generator, size: int
    ) -> FloatArray:
        return rng.normal(self.sigma2 * theta, math.sqrt(self.sigma2), size)

    def frozen(self, theta: NaturalParam) -> Any:
        return stats.norm(loc=self.sigma2 * theta, scale=math.sqrt(self.sigma2))

    def mode_density(self, theta: NaturalParam) -> float:
        self.check_natural(theta)
        return 1.0 / math.sqrt(2.0 * math.pi * self.sigma2)

    def spec_string(self) -> str:
        return f"{self.kind}:sigma2={self.sigma2!r}"


@dataclass(frozen=True)
class GammaShape(ExponentialFamily):
    """Gamma rewards with known shape ``k`` and unknown rate λ = −θ."""

    k: float = 1.0

    kind: ClassVar[str] = "gamma"
    support_description: ClassVar[str] = "[0, +inf)"

    def __post_init__(self) -> None:
        _require_positive("k", self.k)

    @property
    def natural_domain(self) -> Interval:
        return _NEGATIVE

    @property
    def stat_domain(self) -> Interval:
        return _POSITIVE

    @property
    def mean_domain(self) -> Interval:
        return _POSITIVE

    def log_partition(self, theta: float) -> float:
        return -self.k * math.log(-theta)

    def dlog_partition(self, theta: float) -> float:
        return self.k / -theta

    def d2log_partition(self, theta: float) -> float:
        return self.k / (theta * theta)

    def to_natural(self, lam: float) -> NaturalParam:
        _require_positive("Gamma λ", lam)
        return -lam

    def from_natural(self, theta: NaturalParam) -> float:
        return -theta

    def _mean(self, theta: float) -> float:
        return self.k / -theta if theta < 0.0 else _INF

    def _mean_inverse(self, m: float) -> NaturalParam:
        return -self.k / m

    def _suff_stats(self, xs: FloatArray) -> FloatArray:
        return xs

    def _log_base_measure(self, xs: FloatArray) -> FloatArray:
        return np.asarray(xlogy(self.k - 1.0, xs) - gammaln(self.k), dtype=np.float64)

    def _in_support(self, xs: FloatArray) -> NDArray[np.bool_]:
        return np.isfinite(xs) & (xs >= 0.0)

    def sample_rewards(
        self, theta: NaturalParam, rng: np.random.Generator, size: int
    ) -> FloatArray:
        return rng.gamma(self.k, 1.0 / -theta, size)

    def frozen(self, theta: NaturalParam) -> Any:
        return stats.gamma(a=self.k, scale=1.0 / -theta)

    def spec_string(self) -> str:
        return f"{self.kind}:k={self.k!r}"


@dataclass(frozen=True)
class Poisson(ExponentialFamily):
    kind: ClassVar[str] = "poisson"
    support_description: ClassVar[str] = "the nonnegative integers"
    discrete: ClassVar[bool] = True

    @property
    def natural_domain(self) -> Interval:
        return _REALS

    @property
    def stat_domain(self) -> Interval:
        return _POSITIVE

    @property
    def mean_domain(self) -> Interval:
        return _POSITIVE

    def log_partition(self, theta: float) -> float:
        return math.exp(theta)

    def dlog_partition(self, theta: float) -> float:
        return math.exp(theta)

    def d2log_partition(self, theta: float) -> float:
        return math.exp(theta)

    def to_natural(self, lam: float) -> NaturalParam:
        _require_positive("Poisson λ", lam)
        return math.log(lam)

    def from_natural(self, theta: NaturalParam) -> float:
        return math.exp(theta)

    def _mean(self, theta: float) -> float:
        return float(np.exp(theta))

    def _mean_inverse(self, m: float) -> NaturalParam:
        return math.log(m)

    def _suff_stats(self, xs: FloatArray) -> FloatArray:
        return xs

    def _log_base_measure(self, xs: FloatArray) -> FloatArray:
        return np.asarray(-gammaln(xs + 1.0), dtype=np.float64)

    def _in_support(self, xs: FloatArray) -> NDArray[np.bool_]:
        return np.isfinite(xs) & (xs >= 0.0) & (xs == np.floor(xs))

    def sample_rewards(
        self, theta: NaturalParam, rng: np.random.Generator, size: int
    ) -> FloatArray:
        return rng.poisson(math.exp(theta), size).astype(np.float64)

    def frozen(self, theta: NaturalParam) -> Any:
        return stats.poisson(math.exp(theta))

    def spec_string(self) -> str:
        return self.kind


@dataclass(frozen=True)
class Pareto(ExponentialFamily):
    """Pareto rewards with known scale ``xm`` and tail index λ = −θ − 1.

    T(x) = ln x. Environments need λ > 1 (θ < −2) for a finite mean, while the
    posterior lives on the whole natural domain θ < −1.
    """

    xm: float = 1.0

    kind: ClassVar[str] = "pareto"
    support_description: ClassVar[str] = "[xm, +inf)"

    def __post_init__(self) -> None:
        _require_positive("xm", self.xm)

    @property
    def natural_domain(self) -> Interval:
        return Interval(-_INF, -1.0)

    @property
    def theta_domain(self) -> Interval:
        return Interval(-_INF, -2.0)

    @property
    def stat_domain(self) -> Interval:
        return Interval(math.log(self.xm), _INF)

    @property
    def mean_domain(self) -> Interval:
        return Interval(self.xm, _INF)

    def log_partition(self, theta: float) -> float:
        return -math.log(-theta - 1.0) + (theta + 1.0) * math.log(self.xm)

    def dlog_partition(self, theta: float) -> float:
        return 1.0 / (-theta - 1.0) + math.log(self.xm)

    def d2log_partition(self, theta: float) -> float:
        return 1.0 / (theta + 1.0) ** 2

    def to_natural(self, lam: float) -> NaturalParam:
        _require_positive("Pareto λ", lam)
        return -lam - 1.0

    def from_natural(self, theta: NaturalParam) -> float:
        return -theta - 1.0

    def _mean(self, theta: float) -> float:
        lam = -theta - 1.0
        if lam <= 1.0:
            return _INF
        return lam * self.xm / (lam - 1.0)

    def _mean_inverse(self, m: float) -> NaturalParam:
        lam = m / (m - self.xm)
        return -lam - 1.0

    def _suff_stats(self, xs: FloatArray) -> FloatArray:
        return np.log(xs)

    def _log_base_measure(self, xs: FloatArray) -> FloatArray:
        return np.zeros_like(xs)

    def _in_support(self, xs: FloatArray) -> NDArray[np.bool_]:
        return np.isfinite(xs) & (xs >= self.xm)

    def sample_rewards(
        self, theta: NaturalParam, rng: np.random.Generator, size: int
    ) -> FloatArray:
        lam = -theta - 1.0
        u = 1.0 - rng.random(size)
        return self.xm * u ** (-1.0 / lam)

    def frozen(self, theta: NaturalParam) -> Any:
        return stats.pareto(b=-theta - 1.0, scale=self.xm)

    def mode_density(self, theta: NaturalParam) -> float:
        self.check_natural(theta)
        return (-theta - 1.0) / self.xm

    def spec_string(self) -> str:
        return f"{self.kind}:xm={self.xm!r}"


@dataclass(frozen=True)
class Weibull(ExponentialFamily):
    """Weibull rewards with known shape ``k`` and unknown rate λ, θ = −λ^k.

    T(x) = x^k and F(θ) = −ln(−θ).
    """

    k: float = 1.0

    kind: ClassVar[str] = "weibull"
    support_description: ClassVar[str] = "[0, +inf)"

    def __post_init__(self) -> None:
        _require_positive("k", self.k)

    @property
    def natural_domain(self) -> Interval:
        return _NEGATIVE

    @property
    def stat_domain(self) -> Interval:
        return _POSITIVE

    @property
    def mean_domain(self) -> Interval:
        return _POSITIVE

    def log_partition(self, theta: float) -> float:
        return -math.log(-theta)

    def dlog_partition(self, theta: float) -> float:
        return 1.0 / -theta

    def d2log_partition(self, theta: float) -> float:
        return 1.0 / (theta * theta)

    def to_natural(self, lam: float) -> NaturalParam:
        _require_positive("Weibull λ", lam)
        return -(lam**self.k)

    def from_natural(self, theta: NaturalParam) -> float:
        return float((-theta) ** (1.0 / self.k))

    def _mean(self, theta: float) -> float:
        if theta >= 0.0:
            return _INF
        return math.gamma(1.0 + 1.0 / self.k) / self.from_natural(theta)

    def _mean_inverse(self, m: float) -> NaturalParam:
        lam = math.gamma(1.0 + 1.0 / self.k) / m
        return -(lam**self.k)

    def _suff_stats(self, xs: FloatArray) -> FloatArray:
        return np.asarray(xs**self.k, dtype=np.float64)

    def _log_base_measure(self, xs: FloatArray) -> FloatArray:
        return np.asarray(math.log(self.k) + xlogy(self.k - 1.0, xs), dtype=np.float64)

    def _in_support(self, xs: FloatArray) -> NDArray[np.bool_]:
        return np.isfinite(xs) & (xs >= 0.0)

    def sample_rewards(
        self, theta: NaturalParam, rng: np.random.Generator, size: int
    ) -> FloatArray:
        lam = self.from_natural(theta)
        u = 1.0 - rng.random(size)
        return np.asarray((-np.log(u)) ** (1.0 / self.k) / lam, dtype=np.float64)

    def frozen(self, theta: NaturalParam) -> Any:
        return stats.weibull_min(c=self.k, scale=1.0 / self.from_natural(theta))

    def spec_string(self) -> str:
        return f"{self.kind}:k={self.k!r}"
