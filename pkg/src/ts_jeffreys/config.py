from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Literal

from dotenv import dotenv_values
from pydantic import ValidationError, field_validator
from pydantic_settings import BaseSettings

from ts_jeffreys.bandit.models import BanditInstance, PolicyKind, parse_policy
from ts_jeffreys.errors import ConfigError, DomainError
from ts_jeffreys.families.parser import parse_family
from ts_jeffreys.lab.models import LabConfig
from ts_jeffreys.posterior.models import MhConfig

logger = logging.getLogger(__name__)

Command = Literal["simulate", "concentration", "lower-bound", "list-families"]


class ExperimentSpec(BaseSettings):
    command: Command = "simulate"

    # Bandit simulation
    arms: str = "bernoulli@0.5;bernoulli@0.25"
    policy: str = "ts"
    horizon: int = 20000
    runs: int = 200
    seed: int = 0
    workers: int = 1
    out: Path = Path("results")

    # Concentration lab
    lab_family: str = "bernoulli"
    lab_lambda: float = 0.5
    lab_mode: Literal["suffstat", "posterior"] = "suffstat"
    delta: float = 0.25
    gap: float = 0.25
    sample_sizes: str = "10,50,200"
    trials: int = 100_000
    posterior_draws: int = 1000

    # Metropolis-Hastings
    mh_burn_in: int = 100
    mh_step_scale: float = 2.4
    mh_max_adapt_rounds: int = 5

    # Logging
    log_level: str = "INFO"

    model_config = {"env_prefix": "TSJ_"}

    @field_validator("horizon", "runs", "workers", "trials", "posterior_draws")
    @classmethod
    def _at_least_one(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"must be >= 1, got {value}")
        return value

    @field_validator("sample_sizes")
    @classmethod
    def _sizes_parse(cls, value: str) -> str:
        _parse_sizes(value)
        return value

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"unknown log level {value!r}")
        return level

    @classmethod
    def load(cls, path: Path | None = None, **overrides: Any) -> ExperimentSpec:
        """Build a spec from a key=value file plus overrides.

        Precedence: ``overrides`` > file > ``TSJ_*`` environment > defaults.
        """
        values: dict[str, Any] = {}
        if path is not None:
            if not path.is_file():
                raise ConfigError(f"config file {path} does not exist")
            for key, raw in dotenv_values(path).items():
                if raw is None:
                    raise ConfigError(f"{path}: line {key!r} has no '=' value")
                values[key.strip().lower()] = raw
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigError(_describe(e)) from e

    def to_config_text(self) -> str:
        lines = []
        for name in type(self).model_fields:
            lines.append(f"{name}={getattr(self, name)}")
        return "\n".join(lines) + "\n"

    @property
    def sample_size_list(self) -> tuple[int, ...]:
        return _parse_sizes(self.sample_sizes)

    def mh_config(self) -> MhConfig:
        return MhConfig(
            burn_in=self.mh_burn_in,
            step_scale=self.mh_step_scale,
            max_adapt_rounds=self.mh_max_adapt_rounds,
        )

    def build_instance(self) -> BanditInstance:
        instance = BanditInstance.from_spec(self.arms)
        if self.horizon < instance.n_arms:
            raise ConfigError(
                f"horizon T={self.horizon} is smaller than the arm count "
                f"K={instance.n_arms}"
            )
        return instance

    def build_policy(self) -> PolicyKind:
        return parse_policy(self.policy, self.mh_config())

    def build_lab_config(self) -> LabConfig:
        family = parse_family(self.lab_family)
        try:
            theta = family.to_natural(self.lab_lambda)
        except DomainError as e:
            raise ConfigError(f"lab_lambda: {e}") from e
        return LabConfig(
            family=family,
            theta=theta,
            delta=self.delta,
            sample_sizes=self.sample_size_list,
            trials=self.trials,
            seed=self.seed,
            gap=self.gap if self.lab_mode == "posterior" else None,
            posterior_draws=self.posterior_draws,
            mh=self.mh_config(),
        )


def _parse_sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(item) for item in text.split(",") if item.strip())
    except ValueError as e:
        raise ValueError(
            f"sample sizes must be comma-separated integers: {text!r}"
        ) from e
    if not sizes or min(sizes) < 1:
        raise ValueError(f"sample sizes must be positive integers: {text!r}")
    return sizes


def _describe(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        where = ".".join(str(p) for p in item["loc"]) or "spec"
        parts.append(f"{where}: {item['msg']}")
    return "; ".join(parts)
