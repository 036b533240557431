"""Tests for the bound constants and the bound checks."""

import logging
import math
from fractions import Fraction

import pytest

from persistlab.bounds import (
    c1_constant,
    c1_squared,
    c2_constant,
    exact_report_table,
    montecarlo_report_table,
    verify_lower_convolution,
    verify_two_sided,
    verify_upper_convolution,
)
from persistlab.distributions import (
    DecayParams,
    certified_params,
    check_decay,
    default_grid,
    gaussian,
    laplace,
    rademacher,
)
from persistlab.models import BoundInputError, BoundReport, Estimate, Inequality, Source


def test_c1_constants():
    """c1 is 2 for symmetric laws and 6 sqrt(30) otherwise."""
    assert c1_constant(True) == 2.0
    assert c1_constant(False) == pytest.approx(6.0 * math.sqrt(30.0))
    assert c1_squared(False) == 1080
    assert float(c1_squared(False)) == pytest.approx(c1_constant(False) ** 2)


def test_c2_constants():
    """Rademacher's certificate gives 288 / ln 2, Laplace(1) gives K^2 = 4."""
    assert c2_constant(certified_params(rademacher())) == pytest.approx(288.0 / math.log(2.0))
    assert c2_constant(certified_params(laplace(1.0))) == pytest.approx(4.0)


def test_upper_convolution_exact():
    """n = 0: 1 <= 4 E|S_1| / E|X_1| = 4, kept as Fractions."""
    report = verify_upper_convolution(0, Fraction(1), Fraction(1), Fraction(1), 2.0)
    assert report.holds
    assert report.margin == 3
    assert isinstance(report.rhs, Fraction)
    assert report.source is Source.EXACT


def test_upper_convolution_violation():
    report = verify_upper_convolution(3, Fraction(5), Fraction(1), Fraction(1), 1.0)
    assert not report.holds
    assert report.margin == -4


def test_missing_and_non_positive_inputs():
    with pytest.raises(BoundInputError):
        verify_upper_convolution(1, None, Fraction(1), Fraction(1), 2.0)
    with pytest.raises(BoundInputError):
        verify_upper_convolution(1, Fraction(1), Fraction(1), 0, 2.0)
    with pytest.raises(BoundInputError):
        verify_lower_convolution(1, Fraction(1), Fraction(1), Fraction(1), 0.0)


def test_lower_convolution_needs_a_certificate():
    """A failed decay check refuses the lower bound."""
    spec = gaussian()
    failed = check_decay(spec, DecayParams.for_spec(spec, K=0, L=0, theta=2, r=1), default_grid(10))
    with pytest.raises(BoundInputError):
        verify_lower_convolution(2, Fraction(1, 2), Fraction(1), Fraction(1), 4.0, failed)


def test_two_sided_exact_is_squared():
    """Exact two-sided reports compare squares; n = 1 with p_1 = 1/2, E|S_2| = 1."""
    lower, upper = verify_two_sided(1, Fraction(1, 2), Fraction(1), Fraction(1), 2.0, 4.0)
    assert lower.inequality is Inequality.TWO_SIDED_LOWER
    assert upper.inequality is Inequality.TWO_SIDED_UPPER
    assert upper.lhs == Fraction(1, 4)
    assert upper.rhs == 2
    assert lower.lhs == Fraction(1, 2)
    assert lower.rhs == 16 * 4 * 16 * Fraction(1, 4)
    assert lower.holds and upper.holds
    assert upper.constants["squared"] == 1.0


def test_estimates_use_the_allowance():
    """Simulated inputs pass within four standard errors of the margin."""
    conv = Estimate(value=4.3, stderr=0.1, paths=100, seed=1, n=0, config_digest="x")
    report = verify_upper_convolution(0, conv, Fraction(1), Fraction(1), 2.0)
    assert report.source is Source.MONTECARLO
    assert report.allowance == pytest.approx(0.4)
    assert report.holds
    far = Estimate(value=4.5, stderr=0.1, paths=100, seed=1, n=0, config_digest="x")
    assert not verify_upper_convolution(0, far, Fraction(1), Fraction(1), 2.0).holds


def test_exact_table_holds_to_sixteen():
    """All four bounds hold for Rademacher increments, n = 0..16."""
    reports = exact_report_table(16)
    assert len(reports) == 4 * 17
    assert all(report.holds for report in reports)
    assert {r.inequality for r in reports} == set(Inequality)


def test_report_round_trip_keeps_fractions():
    report = exact_report_table(4)[-1]
    assert BoundReport.from_dict(report.to_dict()) == report


def test_montecarlo_table_small(seed):
    """Laplace increments, two horizons, all four bounds."""
    reports = montecarlo_report_table(laplace(1.0), [4, 8], 4000, seed)
    assert len(reports) == 8
    assert all(r.source is Source.MONTECARLO for r in reports)
    assert all(r.holds for r in reports)


def test_c2_grows_with_K_and_L():
    """c2 is non-decreasing in K and in L with r, theta and alpha fixed."""
    grid = [0.0, 0.5, 1.0, 2.0, 5.0, 40.0]
    for r, theta, alpha in ((0.6, 2.0, math.log(2.0)), (1.0, 3.0, 1.0 + math.log(2.0))):

        def c2(K, L):
            return c2_constant(DecayParams(K=K, L=L, r=r, theta=theta, alpha=alpha))

        for fixed in grid:
            along_K = [c2(K, fixed) for K in grid]
            along_L = [c2(fixed, L) for L in grid]
            assert all(a <= b for a, b in zip(along_K, along_K[1:]))
            assert all(a <= b for a, b in zip(along_L, along_L[1:]))


def test_montecarlo_table_logs_a_failed_certificate(seed, caplog):
    """A failed decay check drops the lower-bound rows and says so."""
    spec = gaussian()
    failed = DecayParams.for_spec(spec, K=0, L=0, theta=2, r=1)
    with caplog.at_level(logging.WARNING, logger="persistlab.bounds"):
        reports = montecarlo_report_table(spec, [4], 2000, seed, params=failed)
    assert [r.inequality for r in reports] == [
        Inequality.UPPER_CONVOLUTION,
        Inequality.TWO_SIDED_UPPER,
    ]
    assert "not certified" in caplog.text
    assert "lower-bound rows skipped" in caplog.text
