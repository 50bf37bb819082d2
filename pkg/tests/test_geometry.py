import math

import pytest
from scipy.integrate import quad

from ts_jeffreys.errors import DomainError
from ts_jeffreys.families.base import ExponentialFamily
from ts_jeffreys.families.catalog import Bernoulli, Gaussian, Pareto, Poisson
from ts_jeffreys.lab.geometry import (
    c2_constant,
    kl_ball,
    kl_quadratic_ratio,
    prior_ball_mass,
    prior_mass_profile,
)

# K(0, ln 3) for Bernoulli, i.e. KL(½ ‖ ¾)
BALL_TO_LN3 = 0.5 * math.log(4 / 3)


# --- C₂ ---


def test_c2_bernoulli(bernoulli: Bernoulli) -> None:
    assert 1 / c2_constant(bernoulli, 0.0, 0.25) == pytest.approx(
        math.log(2) / math.log(3) - 0.5, rel=1e-12
    )
    assert c2_constant(bernoulli, 0.0, 0.25) == pytest.approx(7.6377, abs=1e-4)


def test_c2_gaussian(gaussian: Gaussian) -> None:
    assert c2_constant(gaussian, 0.0, 1.0) == pytest.approx(2.0)
    for gap in (0.1, 0.5, 3.0):
        assert c2_constant(gaussian, 0.7, gap) == pytest.approx(2.0 / gap)


def test_c2_grows_as_gap_vanishes(bernoulli: Bernoulli) -> None:
    gaps = [0.2 / 2**i for i in range(6)]
    values = [c2_constant(bernoulli, 0.3, g) for g in gaps]
    for big, small in zip(values, values[1:], strict=False):
        assert small > 2 * big * (1 - 1e-3)


def test_c2_matches_quadrature(
    family_grid: tuple[ExponentialFamily, list[float]],
) -> None:
    family, thetas = family_grid
    theta = thetas[1]
    gap = 0.1 * abs(family.mean(theta)) + 0.05
    theta_gap = family.mean_inverse(family.mean(theta) + gap)
    slope = family.dlog_partition(theta)
    area, _ = quad(lambda t: family.dlog_partition(t) - slope, theta, theta_gap)
    expected = (theta_gap - theta) / area
    assert c2_constant(family, theta, gap) == pytest.approx(expected, rel=1e-6)
    assert c2_constant(family, theta, gap) > 0


def test_c2_rejects_gap_outside_mean_domain(bernoulli: Bernoulli) -> None:
    with pytest.raises(DomainError):
        c2_constant(bernoulli, 0.0, 0.6)
    with pytest.raises(DomainError):
        c2_constant(bernoulli, 0.0, 0.0)


# --- KL balls ---


def test_kl_ball_bernoulli_reaches_ln3(bernoulli: Bernoulli) -> None:
    a, b = kl_ball(bernoulli, 0.0, BALL_TO_LN3)
    assert b == pytest.approx(math.log(3), abs=1e-9)
    assert a == pytest.approx(-math.log(3), abs=1e-9)


def test_kl_ball_gaussian_closed_form(gaussian: Gaussian) -> None:
    a, b = kl_ball(gaussian, 1.0, 0.02)
    assert a == pytest.approx(1.0 - 0.2, abs=1e-9)
    assert b == pytest.approx(1.0 + 0.2, abs=1e-9)


def test_kl_ball_endpoints_hit_radius(
    family_grid: tuple[ExponentialFamily, list[float]],
) -> None:
    family, thetas = family_grid
    for theta in thetas:
        a, b = kl_ball(family, theta, 0.01)
        assert a < theta < b
        assert family.kl(theta, a) == pytest.approx(0.01, abs=1e-9)
        assert family.kl(theta, b) == pytest.approx(0.01, abs=1e-9)


def test_kl_ball_shrinks_and_nests(bernoulli: Bernoulli) -> None:
    eps = 1e-3
    a, b = kl_ball(bernoulli, 0.5, eps)
    a4, b4 = kl_ball(bernoulli, 0.5, eps / 4)
    assert a < a4 < 0.5 < b4 < b
    assert b4 - a4 < (b - a) / 1.9


def test_kl_ball_clamped_to_theta_domain(pareto: Pareto) -> None:
    # K(−2.5, −2) = ln 1.5 − ⅓ ≈ 0.072 is inside a radius of 0.5.
    _, b = kl_ball(pareto, -2.5, 0.5)
    assert b == -2.0


def test_kl_ball_rejects_nonpositive_radius(bernoulli: Bernoulli) -> None:
    with pytest.raises(DomainError):
        kl_ball(bernoulli, 0.0, 0.0)


# --- prior mass ---


def test_prior_mass_decays_like_one_over_u(
    family_grid: tuple[ExponentialFamily, list[float]],
) -> None:
    family, thetas = family_grid
    rows = prior_mass_profile(family, thetas[1], [10, 100, 1000])
    assert [row.u for row in rows] == [10, 100, 1000]
    # Locally the ball has Jeffreys mass 2√2 / u.
    for row in rows:
        assert row.neg_log_mass == pytest.approx(-math.log(row.mass))
        assert row.neg_log_mass <= math.log(row.u) - math.log(2 * math.sqrt(2)) + 0.1
    assert rows[-1].mass * 1000 == pytest.approx(2 * math.sqrt(2), rel=1e-2)


def test_prior_ball_mass_bernoulli_exact(bernoulli: Bernoulli) -> None:
    # √F'' = √(p(1−p)) integrates to 2 arcsin √p over θ.
    a, b = kl_ball(bernoulli, 0.0, BALL_TO_LN3)
    expected = 2 * (math.asin(math.sqrt(0.75)) - math.asin(math.sqrt(0.25)))
    assert prior_ball_mass(bernoulli, 0.0, BALL_TO_LN3) == pytest.approx(
        expected, rel=1e-6
    )
    assert a < b


# --- local quadratic behaviour ---


@pytest.mark.parametrize("theta", [-1.0, 0.0, 0.8])
def test_kl_quadratic_ratio_tends_to_half_fisher(theta: float) -> None:
    for family in (Bernoulli(), Poisson(), Gaussian(sigma2=3.0)):
        ratio = kl_quadratic_ratio(family, theta, 1e-3)
        assert 2 * ratio == pytest.approx(family.d2log_partition(theta), rel=1e-2)
