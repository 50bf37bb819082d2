import math

import numpy as np
import pytest
from scipy import stats

from ts_jeffreys.errors import PosteriorStateError
from ts_jeffreys.families.catalog import Bernoulli, Gaussian, Poisson, Weibull
from ts_jeffreys.posterior.conjugate import sample_conjugate_many
from ts_jeffreys.posterior.metropolis import chain_start, sample_mh
from ts_jeffreys.posterior.models import ArmPosterior, MhConfig


def test_chain_start_at_likelihood_maximizer() -> None:
    assert chain_start(Bernoulli(), ArmPosterior(n=4, s=3.0)) == pytest.approx(
        math.log(3)
    )
    assert chain_start(Poisson(), ArmPosterior(n=2, s=4.0)) == pytest.approx(
        math.log(2)
    )


def test_chain_start_without_data_is_interior(weibull: Weibull) -> None:
    assert chain_start(Bernoulli(), ArmPosterior()) == 0.0
    assert chain_start(weibull, ArmPosterior()) == -1.0


def test_chain_start_pulls_boundary_means_inside() -> None:
    # s/n = 1 sits on the edge of (0, 1); it is moved in by ½/(n+1).
    assert chain_start(Bernoulli(), ArmPosterior(n=3, s=3.0)) == pytest.approx(
        math.log(7)
    )
    assert chain_start(Bernoulli(), ArmPosterior(n=3, s=0.0)) == pytest.approx(
        -math.log(7)
    )
    assert math.isfinite(chain_start(Poisson(), ArmPosterior(n=5, s=0.0)))


def test_mh_matches_conjugate_bernoulli() -> None:
    post = ArmPosterior(n=3, s=2.0)
    rng = np.random.default_rng(7)
    mh = np.array([sample_mh(Bernoulli(), post, MhConfig(), rng) for _ in range(4000)])
    exact = sample_conjugate_many(Bernoulli(), post, np.random.default_rng(8), 20_000)
    assert stats.ks_2samp(mh, exact).statistic < 0.05


@pytest.mark.parametrize(("n", "s"), [(3, 5.0), (10, 4.0)])
def test_mh_matches_conjugate_weibull(weibull: Weibull, n: int, s: float) -> None:
    post = ArmPosterior(n=n, s=s)
    rng = np.random.default_rng(n)
    mh = np.array([sample_mh(weibull, post, MhConfig(), rng) for _ in range(4000)])
    exact = sample_conjugate_many(weibull, post, np.random.default_rng(99), 20_000)
    assert stats.ks_2samp(mh, exact).statistic < 0.05


def test_mh_gaussian_posterior_mean(gaussian: Gaussian) -> None:
    post = ArmPosterior(n=10, s=5.0)
    rng = np.random.default_rng(3)
    draws = [sample_mh(gaussian, post, MhConfig(), rng) for _ in range(500)]
    assert np.mean(draws) == pytest.approx(0.5, abs=0.05)
    assert np.std(draws) == pytest.approx(math.sqrt(0.1), rel=0.2)


def test_mh_draws_stay_in_natural_domain(weibull: Weibull) -> None:
    post = ArmPosterior(n=2, s=0.5)
    rng = np.random.default_rng(1)
    draws = [sample_mh(weibull, post, MhConfig(burn_in=50), rng) for _ in range(200)]
    assert all(d < 0.0 for d in draws)


def test_mh_improper_raises(gaussian: Gaussian) -> None:
    with pytest.raises(PosteriorStateError, match="improper"):
        sample_mh(gaussian, ArmPosterior(), MhConfig(), np.random.default_rng(0))


def test_mh_is_reproducible() -> None:
    post = ArmPosterior(n=5, s=7.0)
    a = sample_mh(Poisson(), post, MhConfig(), np.random.default_rng(42))
    b = sample_mh(Poisson(), post, MhConfig(), np.random.default_rng(42))
    assert a == b
