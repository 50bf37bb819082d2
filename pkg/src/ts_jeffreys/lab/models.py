from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from ts_jeffreys.errors import ConfigError, DomainError
from ts_jeffreys.families.base import ExponentialFamily, NaturalParam
from ts_jeffreys.lab.geometry import c2_constant
from ts_jeffreys.posterior.models import MhConfig


@dataclass(frozen=True)
class LabConfig:
    """One family at one parameter, probed over several sample sizes.

    ``gap`` (Δ) is only needed by the posterior tail experiment; a config
    without it can still run the sufficient-statistic experiment.
    """

    family: ExponentialFamily
    theta: NaturalParam
    delta: float
    sample_sizes: tuple[int, ...]
    trials: int
    seed: int
    gap: float | None = None
    posterior_draws: int = 1000
    mh: MhConfig = field(default_factory=MhConfig)

    def __post_init__(self) -> None:
        try:
            self.family.check_theta(self.theta)
        except DomainError as e:
            raise ConfigError(str(e)) from e
        if not self.delta > 0.0:
            raise ConfigError(f"δ must be positive, got {self.delta!r}")
        if not self.sample_sizes or min(self.sample_sizes) < 1:
            raise ConfigError(
                f"sample sizes must be positive integers, got {list(self.sample_sizes)}"
            )
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.posterior_draws < 1:
            raise ConfigError(
                f"posterior_draws must be >= 1, got {self.posterior_draws}"
            )
        if self.gap is not None:
            self._check_admissible(self.gap)

    def _check_admissible(self, gap: float) -> None:
        if not gap > 0.0:
            raise ConfigError(f"Δ must be positive, got {gap!r}")
        target = self.family.mean(self.theta) + gap
        if not self.family.mean_domain.contains(target):
            raise ConfigError(
                f"μ(θ) + Δ = {target!r} leaves {self.family.kind} mean domain "
                f"{self.family.mean_domain}"
            )
        factor = 1.0 - self.delta * c2_constant(self.family, self.theta, gap)
        if not factor > 0.0:
            raise ConfigError(
                f"inadmissible lab config: 1 − δC₂ > 0 fails "
                f"(δ={self.delta!r}, Δ={gap!r}, 1 − δC₂ = {factor:.6g}); "
                "decrease δ or increase Δ"
            )

    @property
    def lam(self) -> float:
        return self.family.from_natural(self.theta)


class TailEstimate(NamedTuple):
    u: int
    empirical_prob: float
    bound: float
    trials_used: int
    passed_fraction: float = 1.0
