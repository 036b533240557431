"""Tests for increment laws and the decay checker."""

import math

import numpy as np
import pytest
from scipy import stats

from persistlab.distributions import (
    DecayParams,
    certified_params,
    cdf,
    check_decay,
    decay_alpha,
    default_grid,
    format_spec,
    gaussian,
    has_density,
    is_symmetric,
    laplace,
    lower_edge,
    lower_tail,
    mean_abs,
    parse_spec,
    rademacher,
    sample,
    shifted_pareto,
    stable_exponent,
    tail_integral,
    tail_mass,
)
from persistlab.models import SpecError


def test_parse_spec_round_trips():
    """format_spec should invert parse_spec."""
    for text in ("rademacher", "gaussian:1.0", "laplace:2.5", "pareto:1.5"):
        assert format_spec(parse_spec(text)) == text


def test_parse_spec_defaults_scale_to_one():
    """gaussian and laplace without a parameter should use 1."""
    assert parse_spec("gaussian") == gaussian(1.0)
    assert parse_spec("Laplace") == laplace(1.0)


@pytest.mark.parametrize("text", ["cauchy", "gaussian:-1", "pareto:2.5", "pareto", "laplace:x"])
def test_parse_spec_rejects_invalid(text):
    """Unknown tags and invalid parameters should raise SpecError."""
    with pytest.raises(SpecError):
        parse_spec(text)


def test_spec_error_is_value_error():
    """SpecError should also be a ValueError."""
    with pytest.raises(ValueError):
        shifted_pareto(1.0)


def test_symmetry_and_density_flags():
    """Only Pareto is asymmetric and only Rademacher lacks a density."""
    assert is_symmetric(rademacher()) and not has_density(rademacher())
    assert is_symmetric(gaussian()) and has_density(gaussian())
    assert not is_symmetric(shifted_pareto(1.5)) and has_density(shifted_pareto(1.5))


def test_mean_abs_closed_forms():
    """E|X_1| should match the known closed forms."""
    assert mean_abs(rademacher()) == 1.0
    assert mean_abs(gaussian(2.0)) == pytest.approx(2.0 * math.sqrt(2.0 / math.pi))
    assert mean_abs(laplace(4.0)) == pytest.approx(0.25)
    # alpha = 1.5: shift 3, E|X| = 2 * 3^-0.5 / 0.5
    assert mean_abs(shifted_pareto(1.5)) == pytest.approx(4.0 / math.sqrt(3.0))


ALL_SPECS = [rademacher(), gaussian(1.0), laplace(2.0), shifted_pareto(1.5)]


def within_four_se(values: np.ndarray, target: float) -> bool:
    se = float(np.std(values, ddof=1)) / math.sqrt(values.size)
    return abs(float(np.mean(values)) - target) <= 4.0 * se


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_samples_are_centred(spec):
    """Sample means should be within 4 standard errors of zero."""
    x = sample(spec, np.random.default_rng(7), 200_000)
    assert within_four_se(x, 0.0)


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_sample_mean_abs_matches_closed_form(spec):
    """The mean of |x| should be within 4 standard errors of mean_abs(spec)."""
    x = sample(spec, np.random.default_rng(13), 200_000)
    assert within_four_se(np.abs(x), mean_abs(spec))


@pytest.mark.parametrize("spec", [gaussian(1.0), laplace(2.0), shifted_pareto(1.5)])
def test_samples_follow_cdf(spec):
    """Kolmogorov-Smirnov against the closed-form CDF should not reject."""
    rng = np.random.default_rng(11)
    x = sample(spec, rng, 20_000)
    result = stats.kstest(x, lambda v: cdf(spec, v))
    assert result.pvalue > 1e-3


def test_sample_scalar_draw():
    """size=None should give a float."""
    value = sample(gaussian(), np.random.default_rng(0))
    assert isinstance(value, float)


def test_lower_tail_values():
    """P(-X_1 > t) at a few known points."""
    assert lower_tail(rademacher(), 0.5) == 0.5
    assert lower_tail(rademacher(), 1.0) == 0.0
    assert lower_tail(laplace(1.0), 2.0) == pytest.approx(0.5 * math.exp(-2.0))
    assert lower_tail(gaussian(1.0), 0.0) == pytest.approx(0.5)
    assert lower_tail(shifted_pareto(1.5), lower_edge(shifted_pareto(1.5))) == 0.0


def test_lower_tail_rejects_negative_t():
    with pytest.raises(SpecError):
        lower_tail(gaussian(), -1.0)


@pytest.mark.parametrize("spec", [rademacher(), gaussian(1.5), laplace(1.0), shifted_pareto(1.5)])
@pytest.mark.parametrize("t", [0.0, 0.3, 1.7])
def test_tail_integral_closed_form_matches_quadrature(spec, t):
    """The closed form of E[(-X_1 - t)^+] should agree with quadrature."""
    closed = tail_integral(spec, t)
    numeric = tail_integral(spec, t, method="quad")
    assert closed == pytest.approx(numeric, rel=1e-7, abs=1e-10)


def test_decay_alpha_degenerate_tail():
    """alpha is undefined when P(-X_1 > r) = 0."""
    with pytest.raises(SpecError):
        decay_alpha(rademacher(), 1.0)


def test_decay_params_validation():
    """theta * r must exceed 1 and K, L must be non-negative."""
    with pytest.raises(SpecError):
        DecayParams.for_spec(laplace(), K=2, L=0, theta=0.5, r=1)
    with pytest.raises(SpecError):
        DecayParams.for_spec(laplace(), K=-1, L=0, theta=3, r=1)


def test_laplace_decay_holds_exactly():
    """Laplace(1) with K=2, L=0, theta=3, r=1 has no violation."""
    spec = laplace(1.0)
    report = check_decay(spec, DecayParams.for_spec(spec, K=2, L=0, theta=3, r=1))
    assert report.max_violation == 0.0
    assert report.holds


@pytest.mark.parametrize("spec", [rademacher(), gaussian(1.0), laplace(2.0), shifted_pareto(1.5)])
def test_certified_params_pass(spec):
    """The documented parameter sets should pass on the default grid."""
    assert check_decay(spec, certified_params(spec)).holds


def test_decay_violation_detected():
    """K=0, L=0 cannot bound a positive tail."""
    spec = gaussian(1.0)
    params = DecayParams.for_spec(spec, K=0, L=0, theta=2, r=1)
    report = check_decay(spec, params, default_grid(points=20))
    assert not report.holds
    assert report.max_violation > 0
    assert report.points == 400


def test_stable_exponent():
    """gamma = (1 - 1/alpha) / 2 gives 1/6 at alpha = 1.5."""
    assert stable_exponent(1.5) == pytest.approx(1.0 / 6.0)


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_lower_tail_is_non_increasing(spec):
    """P(-X_1 > t) never grows along a grid running past the support edge."""
    grid = np.linspace(0.0, 6.0, 601)
    values = np.asarray(lower_tail(spec, grid))
    assert np.all(np.diff(values) <= 0.0)


@pytest.mark.parametrize("spec", ALL_SPECS)
@pytest.mark.parametrize("t, h", [(0.0, 0.5), (0.3, 1.4), (1.2, 3.0)])
def test_tail_integral_differences_are_tail_mass(spec, t, h):
    """g(t) - g(t + h) equals the integral of P(-X_1 > u) over [t, t + h]."""
    difference = tail_integral(spec, t) - tail_integral(spec, t + h)
    assert difference == pytest.approx(tail_mass(spec, t, t + h), abs=1e-8)
