from pathlib import Path

import numpy as np
import pytest

from ts_jeffreys.bandit.models import BanditInstance
from ts_jeffreys.config import ExperimentSpec
from ts_jeffreys.families.base import ExponentialFamily
from ts_jeffreys.families.catalog import (
    Bernoulli,
    GammaShape,
    Gaussian,
    Pareto,
    Poisson,
    Weibull,
)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def bernoulli() -> Bernoulli:
    return Bernoulli()


@pytest.fixture
def gaussian() -> Gaussian:
    return Gaussian(sigma2=1.0)


@pytest.fixture
def pareto() -> Pareto:
    return Pareto(xm=1.0)


@pytest.fixture
def weibull() -> Weibull:
    return Weibull(k=2.0)


# One family per kind with a few environment parameters inside theta_domain.
FAMILY_GRID: list[tuple[ExponentialFamily, list[float]]] = [
    (Bernoulli(), [-2.0, 0.0, 1.5]),
    (Gaussian(sigma2=2.0), [-1.0, 0.0, 2.0]),
    (GammaShape(k=2.0), [-3.0, -1.0, -0.5]),
    (Poisson(), [-1.0, 0.0, 1.0]),
    (Pareto(xm=1.0), [-5.0, -4.0, -2.5]),
    (Weibull(k=2.0), [-3.0, -1.0, -0.5]),
]


@pytest.fixture(params=FAMILY_GRID, ids=lambda p: p[0].kind)
def family_grid(
    request: pytest.FixtureRequest,
) -> tuple[ExponentialFamily, list[float]]:
    family, thetas = request.param
    return family, thetas


@pytest.fixture
def two_arm_bernoulli() -> BanditInstance:
    return BanditInstance.from_spec("bernoulli@0.5;bernoulli@0.25")


@pytest.fixture
def small_spec(tmp_path: Path) -> ExperimentSpec:
    return ExperimentSpec(
        arms="bernoulli@0.5;bernoulli@0.25",
        horizon=200,
        runs=3,
        seed=11,
        out=tmp_path / "results",
        sample_sizes="10,50",
        trials=2000,
    )
