from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from ts_jeffreys.errors import ConfigError
from ts_jeffreys.families.base import ExponentialFamily, NaturalParam
from ts_jeffreys.families.parser import format_arm, parse_arm
from ts_jeffreys.posterior.models import MhConfig

Arm = tuple[ExponentialFamily, NaturalParam]


@dataclass(frozen=True)
class BanditInstance:
    arms: tuple[Arm, ...]

    def __post_init__(self) -> None:
        if len(self.arms) < 2:
            raise ConfigError(f"a bandit needs at least 2 arms, got {len(self.arms)}")
        for family, theta in self.arms:
            family.check_theta(theta)
        means = self.means
        best = max(means)
        if sum(1 for m in means if m == best) > 1:
            raise ConfigError(f"best arm is not unique: means {means}")

    @classmethod
    def from_spec(cls, text: str) -> BanditInstance:
        """Parse ``bernoulli@0.5;bernoulli@0.25`` (λ per arm)."""
        items = [item for item in text.split(";") if item.strip()]
        return cls(tuple(parse_arm(item) for item in items))

    def to_spec(self) -> str:
        return ";".join(format_arm(family, theta) for family, theta in self.arms)

    @property
    def n_arms(self) -> int:
        return len(self.arms)

    @property
    def means(self) -> list[float]:
        return [family.mean(theta) for family, theta in self.arms]

    @property
    def best_arm(self) -> int:
        means = self.means
        return means.index(max(means))

    @property
    def best_mean(self) -> float:
        return max(self.means)

    @property
    def gaps(self) -> NDArray[np.float64]:
        best = self.best_mean
        return np.asarray([best - m for m in self.means], dtype=np.float64)

    @property
    def single_family(self) -> bool:
        first = self.arms[0][0]
        return all(family == first for family, _ in self.arms)

    def permuted(self, order: Sequence[int]) -> BanditInstance:
        if sorted(order) != list(range(self.n_arms)):
            raise ConfigError(f"{list(order)} is not a permutation of the arms")
        return BanditInstance(tuple(self.arms[i] for i in order))


@dataclass(frozen=True)
class TsJeffreys:
    sampler: Literal["conjugate", "mh"] = "conjugate"
    mh: MhConfig = field(default_factory=MhConfig)


@dataclass(frozen=True)
class Ucb1:
    exploration_c: float = 1.0

    def __post_init__(self) -> None:
        if not self.exploration_c > 0.0:
            raise ConfigError(
                f"exploration_c must be positive, got {self.exploration_c}"
            )


@dataclass(frozen=True)
class KlUcb:
    horizon_aware: bool = False


@dataclass(frozen=True)
class Uniform:
    pass


PolicyKind = TsJeffreys | Ucb1 | KlUcb | Uniform


def parse_policy(text: str, mh: MhConfig | None = None) -> PolicyKind:
    """``ts``, ``ts-mh``, ``ucb1[:c=<real>]``, ``klucb[:horizon_aware=<bool>]``,
    ``uniform``."""
    name, _, params = text.strip().lower().partition(":")
    options: dict[str, str] = {}
    for item in filter(None, (p.strip() for p in params.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"bad policy option {item!r} in {text!r}")
        options[key.strip()] = value.strip()

    def take(key: str, default: str) -> str:
        return options.pop(key, default)

    policy: PolicyKind
    match name:
        case "ts" | "ts-conjugate":
            policy = TsJeffreys("conjugate", mh or MhConfig())
        case "ts-mh":
            policy = TsJeffreys("mh", mh or MhConfig())
        case "ucb1":
            try:
                policy = Ucb1(float(take("c", "1.0")))
            except ValueError as e:
                raise ConfigError(f"bad exploration constant in {text!r}") from e
        case "klucb":
            flag = take("horizon_aware", "false")
            if flag not in ("true", "false"):
                raise ConfigError(f"horizon_aware must be true or false in {text!r}")
            policy = KlUcb(horizon_aware=flag == "true")
        case "uniform":
            policy = Uniform()
        case _:
            raise ConfigError(f"unknown policy {name!r}")
    if options:
        raise ConfigError(f"unused policy options {sorted(options)} in {text!r}")
    return policy


def format_policy(policy: PolicyKind) -> str:
    match policy:
        case TsJeffreys(sampler="mh"):
            return "ts-mh"
        case TsJeffreys():
            return "ts"
        case Ucb1(exploration_c=c):
            return f"ucb1:c={c!r}"
        case KlUcb(horizon_aware=flag):
            return f"klucb:horizon_aware={str(flag).lower()}"
        case Uniform():
            return "uniform"


@dataclass(eq=False)
class RegretTrace:
    horizon: int
    chosen: NDArray[np.int64]
    rewards: NDArray[np.float64]
    pulls: NDArray[np.int64]
    cum_pseudo_regret: NDArray[np.float64]
    seed: int | None = None

    @property
    def final_regret(self) -> float:
        return float(self.cum_pseudo_regret[-1])

    def identical_to(self, other: RegretTrace) -> bool:
        return (
            self.horizon == other.horizon
            and np.array_equal(self.chosen, other.chosen)
            and np.array_equal(self.rewards, other.rewards)
            and np.array_equal(self.pulls, other.pulls)
            and np.array_equal(self.cum_pseudo_regret, other.cum_pseudo_regret)
        )
