"""Tests for path functionals and the argmax intervals."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from persistlab.models import PathError
from persistlab.walks import (
    KInterval,
    Path,
    argmax_index,
    diagnostics,
    interval_family,
    interval_length,
    iterated_sums,
    k_interval,
    partial_sums,
    path_from_csv_row,
    path_to_csv_row,
    paths_from_csv,
    shifted_iterates,
    sum_indicator_bound,
    y_left_batch,
    y_right_batch,
    y_stats,
)

increments = st.lists(
    st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False),
    min_size=3,
    max_size=30,
)

EXAMPLE = Path([1.0, -2.0, 3.0])


def test_path_rejects_empty_and_non_finite():
    """Paths need at least one finite increment."""
    with pytest.raises(PathError):
        Path([])
    with pytest.raises(PathError):
        Path([1.0, math.nan])


def test_path_is_read_only():
    """Increments should not be writable after construction."""
    path = Path([1.0, 2.0])
    with pytest.raises(ValueError):
        path.increments[0] = 5.0


def test_partial_and_iterated_sums():
    """S and S2 should start at 0 and accumulate."""
    assert partial_sums(EXAMPLE).tolist() == [0.0, 1.0, -1.0, 2.0]
    assert iterated_sums(EXAMPLE).tolist() == [0.0, 1.0, 0.0, 2.0]


@given(increments)
def test_iterated_sums_match_weighted_form(xs):
    """S2_k should equal sum_i (k - i + 1) X_i."""
    s2 = iterated_sums(Path(xs))
    for k in range(1, len(xs) + 1):
        weighted = sum((k - i) * x for i, x in enumerate(xs[:k]))
        assert s2[k] == pytest.approx(weighted, abs=1e-9 * (1 + k * k * 10))


@given(increments, st.floats(min_value=-5, max_value=5, allow_nan=False))
def test_shifted_iterates_add_a_line_to_s2(xs, t):
    """(j + 1) t + S2_j, built on the checked iterated sums."""
    path = Path(xs)
    shifted = shifted_iterates(path, t)
    expected = (np.arange(len(xs) + 1) + 1.0) * t + iterated_sums(path)
    assert np.array_equal(shifted, expected)


def test_argmax_index_brute_force():
    """K_0 is the first argmax of S2."""
    assert argmax_index(EXAMPLE, 0.0) == 3
    assert argmax_index(EXAMPLE, -5.0) == 0
    assert argmax_index(EXAMPLE, -0.75) == 1


def test_y_stats_example():
    """Y_{2,2} = X_2 / 2 and Y_{2,n} = max(X_2 / 2, (2 X_2 + X_3) / 3)."""
    left, right = y_stats(EXAMPLE, 2)
    assert left == pytest.approx(-1.0)
    assert right == pytest.approx(-1.0 / 3.0)


def test_y_stats_empty_maxima():
    """Empty maxima are -inf at both ends."""
    assert y_stats(EXAMPLE, 1)[0] == -math.inf
    assert y_stats(EXAMPLE, 4) == (-math.inf, -math.inf)
    with pytest.raises(PathError):
        y_stats(EXAMPLE, 5)


def test_interval_family_example():
    """Intervals for (1, -2, 3), worked out by hand."""
    family = interval_family(EXAMPLE)
    assert family == [
        KInterval(0, -math.inf, -1.0),
        KInterval(1, -1.0, -0.5),
        KInterval(2, 1.0, -2.0),
        KInterval(3, -0.5, math.inf),
    ]
    assert family[2].length == 0.0
    assert k_interval(EXAMPLE, 1) == family[1]


def test_k_interval_prefix_horizon():
    """A smaller horizon uses the prefix path."""
    assert k_interval(EXAMPLE, 1, n=2) == interval_family(EXAMPLE.prefix(2))[1]
    with pytest.raises(PathError):
        k_interval(EXAMPLE, 3, n=2)


def test_interval_length_example():
    assert interval_length(EXAMPLE, 1) == pytest.approx(0.5)
    assert interval_length(EXAMPLE, 2) == 0.0
    with pytest.raises(PathError):
        interval_length(EXAMPLE, 3)


def test_intervals_partition_the_line():
    """Each t away from the end points lies in exactly one interval, that of K_t."""
    rng = np.random.default_rng(3)
    for _ in range(200):
        path = Path(rng.normal(size=int(rng.integers(3, 40))))
        family = interval_family(path)
        ends = [v for iv in family for v in (iv.lo, iv.hi) if math.isfinite(v)]
        for t in rng.uniform(min(ends) - 1.0, max(ends) + 1.0, 20):
            if min(abs(t - e) for e in ends) < 1e-9:
                continue
            containing = [iv.k for iv in family if iv.contains(t)]
            assert containing == [argmax_index(path, t)]


def test_diagnostics_example():
    """A, B at index n - 1 and m, M at index n."""
    diag = diagnostics(EXAMPLE)
    assert (diag.A, diag.B) == (1.0, -1.0)
    assert diag.m == pytest.approx(-1.0)
    assert diag.M == pytest.approx(-0.5)


def test_diagnostics_needs_three_steps():
    with pytest.raises(PathError):
        diagnostics(Path([1.0, -1.0]))


@given(increments)
@settings(max_examples=200)
def test_pathwise_inequalities(xs):
    """Range bound, covering bound and the indicator-sum bound hold on every path."""
    path = Path(xs)
    diag = diagnostics(path)
    tol = 1e-7 * (1.0 + sum(abs(x) for x in xs)) * len(xs)
    covering = sum(interval_length(path, k) for k in range(1, path.n))
    assert diag.M - diag.m <= covering + tol
    assert diag.A - diag.B >= sum_indicator_bound(path) - tol
    s = partial_sums(path)
    assert diag.M - diag.m >= max(-(s[-1] - s[1]), 0.0) - tol


def test_batch_y_statistics_match_scalar():
    """Vectorised Y_{k,2} and Y_{k,n} should equal the per-path values."""
    rng = np.random.default_rng(5)
    x = rng.normal(size=(6, 9))
    for k in (2, 5, 9):
        left = y_left_batch(x, k)
        right = y_right_batch(x, k)
        for row in range(x.shape[0]):
            expected_left, expected_right = y_stats(Path(x[row]), k)
            assert left[row] == pytest.approx(expected_left)
            assert right[row] == pytest.approx(expected_right)
    assert np.all(y_left_batch(x, 1) == -np.inf)


def test_csv_rows():
    """Paths written as CSV rows should read back exactly."""
    row = path_to_csv_row(Path([0.1, -2.5, 1e-17]))
    assert path_from_csv_row(row) == Path([0.1, -2.5, 1e-17])
    assert paths_from_csv([row, "", "1,2,3\n"])[1] == Path([1.0, 2.0, 3.0])


@given(increments)
@settings(max_examples=200)
def test_one_sided_maxima_cover_the_tail(xs):
    """Y_{n,2} + Y_{2,n} >= S_n - X_1."""
    path = Path(xs)
    y_left_n, _ = y_stats(path, path.n)
    _, y_right_2 = y_stats(path, 2)
    s = partial_sums(path)
    tol = 1e-7 * (1.0 + sum(abs(x) for x in xs)) * len(xs)
    assert y_left_n + y_right_2 >= s[-1] - s[1] - tol


def test_range_lower_bound_example():
    """For (1, -1, -1) the range M - m is at least (X_2 + X_3)^- = 2."""
    diag = diagnostics(Path([1.0, -1.0, -1.0]))
    assert diag.M - diag.m >= 2.0
