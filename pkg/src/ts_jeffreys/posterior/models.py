from __future__ import annotations

from dataclasses import dataclass

from ts_jeffreys.errors import ConfigError
from ts_jeffreys.families.base import ExponentialFamily


@dataclass(frozen=True)
class ArmPosterior:
    """Jeffreys posterior of one arm, kept as the sufficient pair (n, s = Σ T(y))."""

    n: int = 0
    s: float = 0.0

    def update(self, family: ExponentialFamily, x: float) -> ArmPosterior:
        return self.observe(family.suff_stat(x))

    def observe(self, stat: float) -> ArmPosterior:
        """Fold in one already-computed T(x)."""
        return ArmPosterior(self.n + 1, self.s + stat)

    @property
    def mean_stat(self) -> float:
        """s / n, the empirical mean of T."""
        return self.s / self.n


@dataclass(frozen=True)
class MhConfig:
    burn_in: int = 100
    step_scale: float = 2.4
    max_adapt_rounds: int = 5

    def __post_init__(self) -> None:
        if self.burn_in < 1:
            raise ConfigError(f"burn_in must be >= 1, got {self.burn_in}")
        if not self.step_scale > 0.0:
            raise ConfigError(f"step_scale must be positive, got {self.step_scale}")
        if self.max_adapt_rounds < 0:
            raise ConfigError(
                f"max_adapt_rounds must be >= 0, got {self.max_adapt_rounds}"
            )
