"""Tests for the exact Rademacher tables."""

from fractions import Fraction

import pytest

from persistlab.exact import (
    ExactTable,
    argmax_law_exact,
    brute_force,
    convolution_sequence,
    double_factorial,
    genfunc_residual,
    mean_abs_Sn_rademacher,
    order1_table,
    order2_table,
    sandwich_violations,
    sparre_residual,
    table_for_order,
    rademacher_below,
    threshold_comparison,
    threshold_table,
)
from persistlab.models import Strictness, TableError


def test_order1_small_values():
    """p_1 = p̄_1 = 1/2, p_2 = 1/4 and p̄_2 = 1/2."""
    table = order1_table(4)
    assert table.p(0) == table.p_bar(0) == 1
    assert table.p(1) == Fraction(1, 2)
    assert table.p_bar(1) == Fraction(1, 2)
    assert table.p(2) == Fraction(1, 4)
    assert table.p_bar(2) == Fraction(1, 2)


def test_order2_small_values():
    """Only (+1, +1) after X_1 = -1 reaches S2_3 = 0, so p_3 = 3/8."""
    table = order2_table(3)
    assert table.p(1) == Fraction(1, 2)
    assert table.p(2) == Fraction(1, 2)
    assert table.p(3) == Fraction(3, 8)
    assert table.p_bar(3) == Fraction(1, 2)


def test_tables_are_monotone():
    """Persistence never increases with n and strict never exceeds weak."""
    for table in (order1_table(64), order2_table(32)):
        for n in range(1, table.n_max + 1):
            assert table.p(n) <= table.p(n - 1)
            assert table.p_bar(n) <= table.p_bar(n - 1)
            assert table.p(n) <= table.p_bar(n)


@pytest.mark.parametrize("order,n", [(1, 12), (2, 12)])
def test_tables_match_brute_force(order, n):
    """Lattice counts agree with enumeration of all sign paths."""
    table = table_for_order(order, n)
    for k in range(n + 1):
        assert table.p(k) == brute_force(order, Strictness.STRICT, k)
        assert table.p_bar(k) == brute_force(order, Strictness.WEAK, k)


@pytest.mark.slow
@pytest.mark.parametrize("order", [1, 2])
def test_tables_match_brute_force_to_sixteen(order):
    table = table_for_order(order, 16)
    for k in range(17):
        assert table.p(k) == brute_force(order, Strictness.STRICT, k)
        assert table.p_bar(k) == brute_force(order, Strictness.WEAK, k)


def test_threshold_table_matches_brute_force():
    """Positive integer levels shift the lattice cap."""
    for order in (1, 2):
        table = threshold_table(order, 10, 2)
        assert table.threshold == 2
        for k in range(11):
            assert table.p(k) == brute_force(order, Strictness.STRICT, k, y=2)
            assert table.p_bar(k) == brute_force(order, Strictness.WEAK, k, y=2)


def test_threshold_zero_is_the_plain_table():
    assert threshold_table(1, 20, 0) == order1_table(20)


@pytest.mark.parametrize("order, n_max", [(1, 64), (2, 40)])
@pytest.mark.parametrize("y", [1, 3])
def test_level_comparison(order, n_max, y):
    """p_n(0) <= p̄_n(0) <= p_n(y) <= p̄_n(y) and p_n(0) >= (1/2)^k p̄_n(y) for k > y."""
    report = threshold_comparison(order, n_max, y, y + 1)
    assert report.chain_violations == ()
    assert report.factor == Fraction(1, 2) ** (y + 1)
    assert min(report.margins) >= 0
    assert report.holds
    assert report.to_dict()["holds"] is True


def test_level_comparison_margins_are_exact():
    """Order 2, y = 1, k = 2: p_2(0) = 1/2 and p̄_2(1) = 3/4, so the margin is 5/16."""
    report = threshold_comparison(2, 2, 1, 2)
    assert report.margins[2] == Fraction(1, 2) - Fraction(1, 4) * Fraction(3, 4)


def test_level_steps_too_coarse():
    """With y/k >= 1 no Rademacher step is below -y/k and the factor vanishes."""
    assert rademacher_below(Fraction(1, 2)) == Fraction(1, 2)
    assert rademacher_below(Fraction(1)) == 0
    report = threshold_comparison(1, 10, 2, 2)
    assert report.factor == 0
    assert report.holds


def test_level_comparison_arguments():
    with pytest.raises(TableError):
        threshold_comparison(2, 10, 0, 1)
    with pytest.raises(TableError):
        threshold_comparison(2, 10, 1, 0)
    with pytest.raises(TableError):
        threshold_comparison(3, 10, 1, 2)


def test_sparre_andersen_identity_is_exact():
    """sum_k p_k p̄_{n-k} = 1 with zero residual, not just approximately."""
    table = order1_table(128)
    for n in range(129):
        assert sparre_residual(table, n) == 0
    assert genfunc_residual(table, 128) == 0


def test_sandwich_holds():
    """p_n <= (2n-1)!!/(2n)!! <= p̄_n for n <= 256."""
    assert sandwich_violations(order1_table(256)) == []


def test_double_factorial_values():
    assert double_factorial(0) == 1
    assert double_factorial(2) == Fraction(3, 8)
    assert double_factorial(4) == Fraction(35, 128)


def test_mean_abs_rademacher():
    assert mean_abs_Sn_rademacher(1) == 1
    assert mean_abs_Sn_rademacher(2) == 1
    assert mean_abs_Sn_rademacher(3) == Fraction(3, 2)


def test_mean_abs_rademacher_is_non_decreasing():
    """E|S_n| never drops, compared exactly for n <= 128."""
    values = [mean_abs_Sn_rademacher(n) for n in range(129)]
    assert all(a <= b for a, b in zip(values, values[1:]))
    assert values[1] == values[2] == 1


def test_convolution_sequence_mixed_is_one():
    """The mixed convolution of the order-1 table is identically 1."""
    table = order1_table(32)
    assert convolution_sequence(table, 32) == [Fraction(1)] * 33
    strict = convolution_sequence(table, 32, kind="strict")
    assert strict[1] == 1
    assert all(value < 1 for value in strict[2:])


def test_argmax_law_sums_to_one():
    law = argmax_law_exact(order1_table(20), 20)
    assert len(law) == 21
    assert sum(law) == 1


def test_table_serialisation_is_exact(tmp_path):
    """JSON keeps every Fraction exactly; CSV writes floats."""
    table = order2_table(40)
    assert ExactTable.from_json(table.to_json()) == table
    path = tmp_path / "table.csv"
    table.to_csv(str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "n,strict,weak"
    assert len(lines) == 42


def test_range_errors():
    """Out-of-range requests raise TableError."""
    with pytest.raises(TableError):
        order1_table(513)
    with pytest.raises(TableError):
        order2_table(129)
    with pytest.raises(TableError):
        order1_table(5).p(6)
    with pytest.raises(TableError):
        threshold_table(1, 5, -1)
    with pytest.raises(TableError):
        table_for_order(3, 5)
    with pytest.raises(TableError):
        brute_force(1, Strictness.STRICT, 21)
    with pytest.raises(TableError):
        sparre_residual(order2_table(5), 3)
