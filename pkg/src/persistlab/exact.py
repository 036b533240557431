"""Exact persistence tables for Rademacher increments.

Counts of surviving sign paths are kept as Python integers in object-dtype numpy
lattices and turned into Fractions over 2^k only on output.
"""

import json
import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Any, Sequence

import numpy as np

from persistlab.constants.messages import (
    TABLE_BRUTE_FORCE_N,
    TABLE_INDEX,
    TABLE_N_RANGE,
    TABLE_ORDER,
    TABLE_ORDER_MISMATCH,
    TABLE_STEPS,
    TABLE_THRESHOLD,
    TABLE_THRESHOLD_POSITIVE,
)
from persistlab.models import Strictness, TableError
from persistlab.utils.records import write_csv

logger = logging.getLogger(__name__)

ORDER1_MAX_N = 512
ORDER2_MAX_N = 128
BRUTE_FORCE_MAX_N = 20
BRUTE_FORCE_CHUNK = 1 << 16


def _encode(value: Fraction) -> list[int]:
    return [value.numerator, value.denominator.bit_length() - 1]


def _decode(pair: Sequence[int]) -> Fraction:
    return Fraction(int(pair[0]), 1 << int(pair[1]))


@dataclass(frozen=True)
class ExactTable:
    """Exact p_n (strict) and p̄_n (weak) for n = 0..n_max, p_0 = p̄_0 = 1."""

    order: int
    n_max: int
    strict: tuple[Fraction, ...]
    weak: tuple[Fraction, ...]
    threshold: int = 0

    def p(self, n: int) -> Fraction:
        self._check(n)
        return self.strict[n]

    def p_bar(self, n: int) -> Fraction:
        self._check(n)
        return self.weak[n]

    def _check(self, n: int) -> None:
        if not 0 <= n <= self.n_max:
            raise TableError(TABLE_INDEX.format(n=n, n_max=self.n_max))

    def to_dict(self) -> dict[str, Any]:
        return {
            "order": self.order,
            "n_max": self.n_max,
            "threshold": self.threshold,
            "strict": [_encode(v) for v in self.strict],
            "weak": [_encode(v) for v in self.weak],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExactTable":
        return cls(
            order=int(data["order"]),
            n_max=int(data["n_max"]),
            strict=tuple(_decode(pair) for pair in data["strict"]),
            weak=tuple(_decode(pair) for pair in data["weak"]),
            threshold=int(data.get("threshold", 0)),
        )

    @classmethod
    def from_json(cls, text: str) -> "ExactTable":
        return cls.from_dict(json.loads(text))

    def to_csv(self, path: str) -> None:
        rows = [(n, float(self.strict[n]), float(self.weak[n])) for n in range(self.n_max + 1)]
        write_csv(path, ("n", "strict", "weak"), rows)


def _check_n(n_max: int, cap: int, order: int) -> None:
    if not 0 <= n_max <= cap:
        raise TableError(TABLE_N_RANGE.format(n=n_max, cap=cap, order=order))


def _check_threshold(y: int) -> None:
    if isinstance(y, bool) or int(y) != y or y < 0:
        raise TableError(TABLE_THRESHOLD.format(y=y))


def _require_order(table: ExactTable, order: int) -> None:
    if table.order != order:
        raise TableError(TABLE_ORDER_MISMATCH.format(expected=order, got=table.order))


def _cap(y: int, strictness: Strictness) -> int:
    return y - 1 if strictness is Strictness.STRICT else y


def _order1_counts(n_max: int, cap: int) -> list[int]:
    # index d = cap + 1 - S; admissible states have d >= 1, S_0 = 0 sits at cap + 1
    counts = np.zeros(cap + n_max + 3, dtype=object)
    counts[cap + 1] = 1
    survivors = [1]
    for _ in range(n_max):
        step = np.zeros_like(counts)
        step[1:] += counts[:-1]
        step[:-1] += counts[1:]
        step[0] = 0
        counts = step
        survivors.append(int(counts.sum()))
    return survivors


def _order2_counts(n_max: int, cap: int) -> list[int]:
    # rows hold S + n_max, columns hold S2 + half; the last admissible column is cap_col
    half = n_max * (n_max + 1) // 2
    cap_col = half + cap
    cols = half + max(cap, 0) + 1
    grid = np.zeros((2 * n_max + 1, cols), dtype=object)
    grid[n_max, half] = 1
    survivors = [1]
    for k in range(1, n_max + 1):
        lo_old = half - (k - 1) * k // 2
        step = np.zeros_like(grid)
        for s in range(-k, k + 1):
            src = np.zeros(cols - lo_old, dtype=object)
            for prev in (s - 1, s + 1):
                if abs(prev) <= k - 1:
                    src = src + grid[prev + n_max, lo_old:]
            start = lo_old + s
            stop = min(cols, start + src.size)
            if stop > start:
                step[s + n_max, start:stop] = src[: stop - start]
        if cap_col + 1 < cols:
            step[:, cap_col + 1 :] = 0
        grid = step
        lo_new = half - k * (k + 1) // 2
        survivors.append(int(grid[n_max - k : n_max + k + 1, lo_new:].sum()))
    return survivors


def _table(order: int, n_max: int, y: int) -> ExactTable:
    counter = _order1_counts if order == 1 else _order2_counts
    started = time.perf_counter()
    strict = counter(n_max, _cap(y, Strictness.STRICT))
    weak = counter(n_max, _cap(y, Strictness.WEAK))
    logger.info(
        f"Built order-{order} table to n={n_max} (y={y}) "
        f"in {time.perf_counter() - started:.2f}s"
    )
    return ExactTable(
        order=order,
        n_max=n_max,
        strict=tuple(Fraction(c, 1 << k) for k, c in enumerate(strict)),
        weak=tuple(Fraction(c, 1 << k) for k, c in enumerate(weak)),
        threshold=y,
    )


def order1_table(n_max: int) -> ExactTable:
    """P(max_{k<=n} S_k < 0) and P(max_{k<=n} S_k <= 0) for n = 0..n_max.

    Raises:
        TableError: n_max outside 0..512.
    """
    _check_n(n_max, ORDER1_MAX_N, 1)
    return _table(1, n_max, 0)


def order2_table(n_max: int) -> ExactTable:
    """Persistence of the iterated sums S2_k below 0 for n = 0..n_max.

    The lattice holds (S_k, S2_k) with |S_k| <= k and |S2_k| <= k(k+1)/2.

    Raises:
        TableError: n_max outside 0..128.
    """
    _check_n(n_max, ORDER2_MAX_N, 2)
    return _table(2, n_max, 0)


def threshold_table(order: int, n_max: int, y: int) -> ExactTable:
    """p_n(y) and p̄_n(y) for an integer level y >= 0."""
    if order not in (1, 2):
        raise TableError(TABLE_ORDER.format(order=order))
    _check_threshold(y)
    _check_n(n_max, ORDER1_MAX_N if order == 1 else ORDER2_MAX_N, order)
    return _table(order, n_max, int(y))


def table_for_order(order: int, n_max: int) -> ExactTable:
    if order == 1:
        return order1_table(n_max)
    if order == 2:
        return order2_table(n_max)
    raise TableError(TABLE_ORDER.format(order=order))


@dataclass(frozen=True)
class ThresholdComparison:
    """p_n(0) against p_n(y) for one order and level, with k steps of size y/k."""

    order: int
    n_max: int
    y: int
    k: int
    factor: Fraction
    chain_violations: tuple[int, ...]
    margins: tuple[Fraction, ...]

    @property
    def holds(self) -> bool:
        return not self.chain_violations and all(m >= 0 for m in self.margins)

    def to_dict(self) -> dict[str, Any]:
        return {
            "order": self.order,
            "n_max": self.n_max,
            "y": self.y,
            "k": self.k,
            "factor": str(self.factor),
            "chain_violations": list(self.chain_violations),
            "min_margin": str(min(self.margins)),
            "holds": self.holds,
        }


def rademacher_below(eps: Fraction) -> Fraction:
    """P(X_1 < -eps) for Rademacher X_1 and eps >= 0."""
    return Fraction(1, 2) if eps < 1 else Fraction(0)


def threshold_comparison(order: int, n_max: int, y: int, k: int) -> ThresholdComparison:
    """Compare the tables at level 0 and level y.

    Checks p_n(0) <= p̄_n(0) <= p_n(y) <= p̄_n(y) for every n, and reports the
    margins p_n(0) - P(X_1 < -y/k)^k p̄_n(y), which are never negative.

    Raises:
        TableError: y < 1, k < 1, or n_max out of range for the order.
    """
    if isinstance(y, bool) or int(y) != y or y < 1:
        raise TableError(TABLE_THRESHOLD_POSITIVE.format(y=y))
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise TableError(TABLE_STEPS.format(k=k))
    base = table_for_order(order, n_max)
    raised = threshold_table(order, n_max, y)
    factor = rademacher_below(Fraction(int(y), int(k))) ** int(k)

    violations = tuple(
        n
        for n in range(n_max + 1)
        if not base.strict[n] <= base.weak[n] <= raised.strict[n] <= raised.weak[n]
    )
    margins = tuple(base.strict[n] - factor * raised.weak[n] for n in range(n_max + 1))
    report = ThresholdComparison(
        order=order,
        n_max=n_max,
        y=int(y),
        k=int(k),
        factor=factor,
        chain_violations=violations,
        margins=margins,
    )
    if not report.holds:
        logger.warning(f"Level comparison failed for order {order}, y={y}, k={k}")
    return report


def double_factorial(n: int) -> Fraction:
    """(2n-1)!!/(2n)!!, which equals C(2n, n)/4^n."""
    return Fraction(comb(2 * n, n), 4**n)


def _convolution(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> Fraction:
    return sum((a[k] * b[n - k] for k in range(n + 1)), Fraction(0))


def sparre_residual(table: ExactTable, n: int) -> Fraction:
    """sum_{k=0}^{n} p_k p̄_{n-k} - 1."""
    _require_order(table, 1)
    table._check(n)
    return _convolution(table.strict, table.weak, n) - 1


def genfunc_residual(table: ExactTable, N: int) -> Fraction:
    """Largest coefficient of P(x) P̄(x) (1 - x) - 1 up to x^N, in absolute value."""
    _require_order(table, 1)
    table._check(N)
    worst = Fraction(0)
    previous = Fraction(0)
    for n in range(N + 1):
        current = _convolution(table.strict, table.weak, n)
        coefficient = current - previous - (1 if n == 0 else 0)
        worst = max(worst, abs(coefficient))
        previous = current
    return worst


def sandwich_violations(table: ExactTable) -> list[int]:
    """Indices n where p_n <= (2n-1)!!/(2n)!! <= p̄_n fails."""
    _require_order(table, 1)
    return [
        n
        for n in range(table.n_max + 1)
        if not table.strict[n] <= double_factorial(n) <= table.weak[n]
    ]


def mean_abs_Sn_rademacher(n: int) -> Fraction:
    """E|S_n| = 2^-n sum_j |2j - n| C(n, j)."""
    return Fraction(sum(abs(2 * j - n) * comb(n, j) for j in range(n + 1)), 1 << n)


def brute_force(order: int, strictness: Strictness, n: int, y: int = 0) -> Fraction:
    """Persistence probability by enumerating all 2^n sign paths.

    Raises:
        TableError: n > 20 or order not 1 or 2.
    """
    if order not in (1, 2):
        raise TableError(TABLE_ORDER.format(order=order))
    if not 0 <= n <= BRUTE_FORCE_MAX_N:
        raise TableError(TABLE_BRUTE_FORCE_N.format(cap=BRUTE_FORCE_MAX_N, n=n))
    if n == 0:
        return Fraction(1)

    strictness = Strictness(strictness)
    shifts = np.arange(n, dtype=np.int64)
    total = 1 << n
    survivors = 0
    for start in range(0, total, BRUTE_FORCE_CHUNK):
        codes = np.arange(start, min(start + BRUTE_FORCE_CHUNK, total), dtype=np.int64)
        steps = 1 - 2 * ((codes[:, None] >> shifts) & 1)
        sums = np.cumsum(steps, axis=1)
        if order == 2:
            sums = np.cumsum(sums, axis=1)
        peak = sums.max(axis=1)
        alive = peak < y if strictness is Strictness.STRICT else peak <= y
        survivors += int(np.count_nonzero(alive))
    return Fraction(survivors, total)


def convolution_sequence(table: ExactTable, n: int, kind: str = "mixed") -> list[Fraction]:
    """sum_{k=0}^{m} p_k q_{m-k} for m = 0..n, with q = p̄ ("mixed") or q = p ("strict")."""
    table._check(n)
    other = table.weak if kind == "mixed" else table.strict
    return [_convolution(table.strict, other, m) for m in range(n + 1)]


def argmax_law_exact(table: ExactTable, n: int) -> list[Fraction]:
    """P(first argmax of S_0..S_n = k) = p_k p̄_{n-k} for k = 0..n."""
    _require_order(table, 1)
    table._check(n)
    return [table.strict[k] * table.weak[n - k] for k in range(n + 1)]
