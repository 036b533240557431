"""Tests for the block-parallel Monte Carlo estimators."""

import math

import numpy as np
import pytest

from persistlab.distributions import gaussian, laplace, rademacher, shifted_pareto
from persistlab.models import BudgetError, Estimate, FitError, SpecError, Strictness
from persistlab.montecarlo import (
    BLOCK_PATHS,
    Comparison,
    Moments,
    RunConfig,
    argmax_law,
    block_sizes,
    convolution_estimate,
    estimate_mean_abs_S,
    estimate_persistence,
    fit_exponent,
    marginal_identity,
    maximal_inequality_report,
    merge_moments,
    moment_identity,
    path_corpus_check,
    persistence_sweep,
    survival_table,
    upper_chain_check,
)
from persistlab.utils.budget import init_step_budget


def within(estimate: Estimate, target: float, k: float = 4.0) -> bool:
    return abs(estimate.value - target) <= k * estimate.stderr


def test_run_config_validation():
    """Bad sizes, thresholds and orders are rejected up front."""
    for bad in ({"paths": 0}, {"n": -1}, {"y": -0.5}, {"workers": 0}, {"order": 3}):
        with pytest.raises(ValueError):
            RunConfig(**{"spec": gaussian(), "n": 4, "paths": 10, "seed": 1, **bad})


def test_digest_ignores_workers():
    """Worker count cannot change a result, so it stays out of the digest."""
    cfg = RunConfig(spec=gaussian(), n=4, paths=10, seed=1)
    assert cfg.digest == cfg.with_(workers=8).digest
    assert cfg.digest != cfg.with_(seed=2).digest
    assert cfg.to_dict()["workers"] == 1


def test_block_sizes():
    assert block_sizes(BLOCK_PATHS) == [BLOCK_PATHS]
    assert block_sizes(2 * BLOCK_PATHS + 5) == [BLOCK_PATHS, BLOCK_PATHS, 5]


def test_moments_merge_matches_numpy():
    """Chan's pairwise update equals the one-pass variance."""
    values = np.random.default_rng(0).normal(size=1000)
    merged = merge_moments([Moments.of(part) for part in np.array_split(values, 7)])
    assert merged.count == 1000
    assert merged.mean == pytest.approx(values.mean())
    assert merged.variance == pytest.approx(values.var(ddof=1))
    assert Moments().merge(Moments.of(values[:3])) == Moments.of(values[:3])


def test_rademacher_order2_matches_exact(seed):
    """p^(2)_3 = 3/8 for Rademacher increments."""
    cfg = RunConfig(spec=rademacher(), n=3, paths=40_000, seed=seed, order=2)
    assert within(estimate_persistence(cfg), 0.375)


def test_estimates_independent_of_worker_count(seed):
    """Same seed, same estimate, whatever the number of workers."""
    cfg = RunConfig(spec=gaussian(), n=64, paths=3 * BLOCK_PATHS + 17, seed=seed)
    assert estimate_persistence(cfg) == estimate_persistence(cfg.with_(workers=3))
    assert estimate_mean_abs_S(cfg) == estimate_mean_abs_S(cfg.with_(workers=2))


def test_rademacher_ties_are_counted(seed):
    """Integer walks land on the level 0 all the time."""
    cfg = RunConfig(spec=rademacher(), n=10, paths=5000, seed=seed, strictness=Strictness.WEAK)
    assert estimate_persistence(cfg).ties > 0


def test_sweep_is_monotone(seed):
    """On one path set, strict <= weak and both grow with y."""
    cfg = RunConfig(spec=laplace(), n=50, paths=5000, seed=seed)
    rows = persistence_sweep(cfg, [2.0, 0.0, 1.0, 1.0])
    assert [row.y for row in rows] == [0.0, 1.0, 2.0]
    for row in rows:
        assert row.strict.value <= row.weak.value
    assert rows[0].weak.value <= rows[1].strict.value <= rows[2].strict.value


def test_survival_table_ends_at_the_persistence_estimate(seed):
    """The last entry of the survival table is p̂_n from the same streams."""
    cfg = RunConfig(spec=gaussian(), n=30, paths=5000, seed=seed)
    table = survival_table(cfg)
    assert table.strict[0] == table.weak[0] == 1.0
    assert table.strict[-1] == pytest.approx(estimate_persistence(cfg).value)
    assert all(a >= b for a, b in zip(table.strict, table.strict[1:]))
    assert len(table.rows()) == 31


def test_mixed_convolution_is_one(seed):
    """sum_k p_k p̄_{n-k} = 1 for every symmetric walk."""
    for spec in (rademacher(), gaussian()):
        cfg = RunConfig(spec=spec, n=40, paths=20_000, seed=seed)
        assert within(convolution_estimate(cfg), 1.0)


def test_convolution_rejects_unknown_kind(seed):
    with pytest.raises(ValueError):
        convolution_estimate(RunConfig(spec=gaussian(), n=4, paths=10, seed=seed), kind="weak")


def test_mean_abs_rademacher(seed):
    """E|S_3| = 3/2."""
    cfg = RunConfig(spec=rademacher(), n=3, paths=20_000, seed=seed)
    assert within(estimate_mean_abs_S(cfg), 1.5)
    assert estimate_mean_abs_S(cfg.with_(n=0)).value == 0.0


def test_argmax_law(seed):
    """The first-argmax law matches p_k p̄_{n-k}."""
    for spec in (rademacher(), gaussian()):
        report = argmax_law(RunConfig(spec=spec, n=12, paths=20_000, seed=seed))
        assert sum(report.reference) == pytest.approx(1.0)
        assert report.max_z < 5.0


def test_argmax_law_needs_symmetry(seed):
    with pytest.raises(SpecError):
        argmax_law(RunConfig(spec=shifted_pareto(1.5), n=5, paths=10, seed=seed))


@pytest.mark.parametrize("weak", [False, True])
def test_marginal_identity(seed, weak):
    """P(Y_{k,2} < 0) and P(Y_{k,n} <= 0) match order-2 persistence."""
    report = marginal_identity(RunConfig(spec=gaussian(), n=10, paths=20_000, seed=seed), 4, weak)
    assert abs(report.z) < 4.0


def test_marginal_identity_range(seed):
    with pytest.raises(ValueError):
        marginal_identity(RunConfig(spec=gaussian(), n=5, paths=10, seed=seed), 6)


def test_fit_recovers_known_exponent():
    """p = 2 n^-1/4 exactly gives gamma = 1/4."""
    points = [(n, 2.0 * n**-0.25, 1e-3, math.inf) for n in (8, 16, 32, 64, 128)]
    result = fit_exponent(points)
    assert result.gamma == pytest.approx(0.25, abs=1e-9)
    assert result.intercept == pytest.approx(math.log(2.0), abs=1e-9)
    assert result.points == 5


def test_fit_drops_points_with_few_events():
    """Points with p̂ x paths below the threshold do not count."""
    points = [(n, n**-0.5, 0.01, 10_000) for n in (4, 16, 64, 256)]
    assert fit_exponent(points).points == 4
    assert fit_exponent(points, min_events=1000).points == 3
    with pytest.raises(FitError):
        fit_exponent(points, min_events=2000)


def test_fit_too_few_points():
    with pytest.raises(FitError):
        fit_exponent([(8, 0.5, 0.01), (16, 0.4, 0.01)])


def test_comparison_relations():
    """A comparison holds within allowance_se standard errors."""
    assert Comparison("a", 1, 1.0, 1.3, 0.1, "==").holds
    assert not Comparison("a", 1, 1.0, 1.5, 0.1, "==").holds
    assert Comparison("a", 1, 1.3, 1.0, 0.1, "<=").holds
    assert not Comparison("a", 1, 1.5, 1.0, 0.1, "<=").holds
    assert Comparison("a", 1, 0.7, 1.0, 0.1, ">=").holds
    assert Comparison("a", 1, 0.0, 1.0, 0.0, "<=").to_dict()["holds"]


def test_maximal_inequalities_hold(seed):
    for spec in (gaussian(), shifted_pareto(1.5)):
        report = maximal_inequality_report(spec, 40, [0.5, 2.0, 6.0], 5000, seed)
        assert report.violations == []
    names = {row.name for row in report.rows}
    assert "ottaviani" not in names and "montgomery-smith" in names


def test_range_moment_identity(seed):
    """E[A_n - B_n] = 2 E max S_k for symmetric walks."""
    assert moment_identity(gaussian(), 16, 20_000, seed).holds


def test_upper_chain(seed):
    assert upper_chain_check(laplace(), 10, 20_000, seed).holds
    with pytest.raises(ValueError):
        upper_chain_check(laplace(), 2, 10, seed)


def test_path_corpus(seed):
    """Interval membership and the pathwise bounds on random paths."""
    for spec in (gaussian(), rademacher(), shifted_pareto(1.5)):
        report = path_corpus_check(spec, 30, seed, t_per_path=50)
        assert report.pairs == 1500
        assert report.passed, report.to_dict()


def test_budget_is_enforced(seed):
    """Requests beyond paths x steps are refused before any simulation."""
    init_step_budget(1000, check_memory=False)
    with pytest.raises(BudgetError):
        estimate_persistence(RunConfig(spec=gaussian(), n=100, paths=100, seed=seed))
