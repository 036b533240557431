"""Path functionals: partial sums, iterated sums and the argmax-interval machinery.

Indices follow the usual convention: increments X_1..X_n, partial sums S_0 = 0,
S_k = X_1 + ... + X_k, iterated sums S2_0 = 0, S2_k = S_1 + ... + S_k. For a shift t
the translated iterates are (j + 1) t + S2_j, and K_t is the first index in 0..n
attaining their maximum. Each event {K_t = k} is a half-open interval in t whose
end points are expressed through the one-sided maxima Y_{k,2} (looking back from
X_k) and Y_{k,n} (looking forward from X_k).
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from persistlab.constants.messages import (
    PATH_EMPTY,
    PATH_EMPTY_VALUES,
    PATH_INDEX_RANGE,
    PATH_NON_FINITE,
    PATH_SUM_MISMATCH,
    PATH_TOO_SHORT,
)
from persistlab.models import PathError

# Allowed disagreement between the two iterated-sum formulas, in units of
# relative rounding per term.
ITERATED_SUM_ULPS = 8


@dataclass(frozen=True, eq=False)
class Path:
    """Increments X_1..X_n of one sample path."""

    increments: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.array(self.increments, dtype=float).reshape(-1)
        if arr.size == 0:
            raise PathError(PATH_EMPTY)
        if not np.all(np.isfinite(arr)):
            raise PathError(PATH_NON_FINITE)
        arr.setflags(write=False)
        object.__setattr__(self, "increments", arr)

    @property
    def n(self) -> int:
        return int(self.increments.size)

    def __len__(self) -> int:
        return self.n

    def x(self, i: int) -> float:
        """X_i, 1-based."""
        return float(self.increments[i - 1])

    def prefix(self, n: int) -> "Path":
        return Path(self.increments[:n])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Path) and np.array_equal(self.increments, other.increments)

    def __repr__(self) -> str:
        return f"Path({self.increments.tolist()!r})"


@dataclass(frozen=True)
class KInterval:
    """The half-open set (lo, hi] of shifts t with K_t = k."""

    k: int
    lo: float
    hi: float

    def contains(self, t: float) -> bool:
        return self.lo < t <= self.hi

    @property
    def length(self) -> float:
        return max(self.hi - self.lo, 0.0)


@dataclass(frozen=True)
class PathDiagnostics:
    """A, B at index n - 1 and m, M at index n for a path of n increments.

    A_{n-1} = max_{1<=k<=n-1} -S_{k+1} reaches S_n, so a path of n increments
    yields A and B one index below m and M.
    """

    n: int
    A: float
    B: float
    m: float
    M: float


def _positive(y: float) -> float:
    """(y)^+ with (-inf)^+ = 0."""
    return y if y > 0.0 else 0.0


def partial_sums(path: Path) -> np.ndarray:
    """(S_0, S_1, ..., S_n) with S_0 = 0."""
    return np.concatenate(([0.0], np.cumsum(path.increments)))


def iterated_sums(path: Path) -> np.ndarray:
    """(S2_0, ..., S2_n) with S2_0 = 0.

    Computed as the cumulative sum of partial sums and checked against the weighted
    form S2_k = sum_i (k - i + 1) X_i.

    Raises:
        PathError: The two formulas disagree beyond rounding.
    """
    x = path.increments
    cumulative = np.cumsum(np.cumsum(x))
    weights = np.arange(1, x.size + 1, dtype=float)
    weighted = np.convolve(x, weights)[: x.size]
    scale = np.convolve(np.abs(x), weights)[: x.size]
    tolerance = ITERATED_SUM_ULPS * np.finfo(float).eps * np.maximum(scale, 1.0) * weights
    bad = np.flatnonzero(np.abs(cumulative - weighted) > tolerance)
    if bad.size:
        k = int(bad[0])
        raise PathError(PATH_SUM_MISMATCH.format(k=k + 1, a=cumulative[k], b=weighted[k]))
    return np.concatenate(([0.0], cumulative))


def first_argmax(values: Sequence[float]) -> int:
    """Smallest index attaining the maximum."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise PathError(PATH_EMPTY_VALUES)
    return int(np.argmax(arr))


def shifted_iterates(path: Path, t: float) -> np.ndarray:
    """(j + 1) t + S2_j for j = 0..n."""
    s2 = iterated_sums(path)
    return (np.arange(s2.size) + 1.0) * t + s2


def argmax_index(path: Path, t: float) -> int:
    """K_t by brute force over j = 0..n."""
    return first_argmax(shifted_iterates(path, t))


def _sums(path: Path) -> tuple[np.ndarray, np.ndarray]:
    s = partial_sums(path)
    return s, np.cumsum(s)


def _check_index(k: int, lo: int, hi: int) -> None:
    if not lo <= k <= hi:
        raise PathError(PATH_INDEX_RANGE.format(k=k, lo=lo, hi=hi))


def _y_left(s: np.ndarray, c: np.ndarray, k: int) -> float:
    # max_{j=1..k-1} (j X_k + (j-1) X_{k-1} + ... + X_{k-j+1}) / (j + 1)
    n = s.size - 1
    if k <= 1 or k > n:
        return -math.inf
    j = np.arange(1, k, dtype=float)
    values = (j * s[k] - c[k - 1] + c[k - 1 - np.arange(1, k)]) / (j + 1.0)
    return float(values.max())


def _y_right(s: np.ndarray, c: np.ndarray, k: int) -> float:
    # max_{j=1..n-k+1} (j X_k + (j-1) X_{k+1} + ... + X_{k+j-1}) / (j + 1)
    n = s.size - 1
    if k < 1 or k > n:
        return -math.inf
    idx = np.arange(1, n - k + 2)
    j = idx.astype(float)
    values = (c[k + idx - 1] - c[k - 1] - j * s[k - 1]) / (j + 1.0)
    return float(values.max())


def y_stats(path: Path, k: int) -> tuple[float, float]:
    """(Y_{k,2}, Y_{k,n}) for 1 <= k <= n + 1.

    Empty maxima are -inf, which gives Y_{1,2} = Y_{n+1,n} = -inf; Y_{n+1,2} would
    need X_{n+1} and is reported as -inf as well.

    Raises:
        PathError: k outside 1..n+1.
    """
    _check_index(k, 1, path.n + 1)
    s, c = _sums(path)
    return _y_left(s, c, k), _y_right(s, c, k)


def _interval(s: np.ndarray, c: np.ndarray, k: int) -> KInterval:
    n = s.size - 1
    if k == 0:
        return KInterval(0, -math.inf, -s[1] - _positive(_y_right(s, c, 2)))
    lo = -s[k] + _positive(_y_left(s, c, k))
    if k == n:
        return KInterval(n, float(lo), math.inf)
    hi = -s[k + 1] - _positive(_y_right(s, c, k + 2))
    return KInterval(k, float(lo), float(hi))


def k_interval(path: Path, k: int, n: Optional[int] = None) -> KInterval:
    """The set of shifts t with K_t = k, as (lo, hi].

    Args:
        path: Sample path.
        k: Index in 0..n.
        n: Horizon; defaults to the full path, smaller values use the prefix.

    Raises:
        PathError: Index out of range.
    """
    n = path.n if n is None else n
    _check_index(n, 1, path.n)
    _check_index(k, 0, n)
    s, c = _sums(path.prefix(n))
    return _interval(s, c, k)


def interval_family(path: Path) -> list[KInterval]:
    """All n + 1 intervals, k = 0..n."""
    s, c = _sums(path)
    return [_interval(s, c, k) for k in range(path.n + 1)]


def interval_length(path: Path, k: int) -> float:
    """Lebesgue measure of {t: K_t = k} for 1 <= k <= n - 1.

    Equals (X_{k+1} + (Y_{k,2})^+ + (Y_{k+2,n})^+)^-.
    """
    _check_index(k, 1, path.n - 1)
    s, c = _sums(path)
    total = path.x(k + 1) + _positive(_y_left(s, c, k)) + _positive(_y_right(s, c, k + 2))
    return max(-total, 0.0)


def diagnostics(path: Path) -> PathDiagnostics:
    """A_{n-1}, B_{n-1}, m_n and M_n for a path of n increments.

    Raises:
        PathError: Fewer than 3 increments (A and B need index n - 1 >= 2).
    """
    n = path.n
    if n < 3:
        raise PathError(PATH_TOO_SHORT.format(length=n, minimum=3))
    s, c = _sums(path)
    A = float(-np.min(s[2 : n + 1]))
    B = float(-np.max(s[1:n]))
    m = -path.x(1) - _positive(_y_right(s, c, 2))
    M = float(-s[n]) + _positive(_y_left(s, c, n))
    return PathDiagnostics(n=n, A=A, B=B, m=m, M=M)


def sum_indicator_bound(path: Path) -> float:
    """sum_{k=1}^{n-1} (X_{k+1})^- 1{Y_{k,2} < 0} 1{Y_{k+2,n} <= 0}."""
    s, c = _sums(path)
    total = 0.0
    for k in range(1, path.n):
        if _y_left(s, c, k) < 0.0 and _y_right(s, c, k + 2) <= 0.0:
            total += max(-path.x(k + 1), 0.0)
    return total


def y_left_batch(increments: np.ndarray, k: int) -> np.ndarray:
    """Y_{k,2} for every row of a (paths, >= k) increment matrix."""
    x = np.asarray(increments, dtype=float)
    if k <= 1:
        return np.full(x.shape[0], -np.inf)
    s = np.concatenate((np.zeros((x.shape[0], 1)), np.cumsum(x[:, :k], axis=1)), axis=1)
    c = np.cumsum(s, axis=1)
    idx = np.arange(1, k)
    j = idx.astype(float)
    values = (j * s[:, [k]] - c[:, [k - 1]] + c[:, k - 1 - idx]) / (j + 1.0)
    return values.max(axis=1)


def y_right_batch(increments: np.ndarray, k: int) -> np.ndarray:
    """Y_{k,n} for every row of a (paths, n) increment matrix."""
    x = np.asarray(increments, dtype=float)
    n = x.shape[1]
    if k > n:
        return np.full(x.shape[0], -np.inf)
    s = np.concatenate((np.zeros((x.shape[0], 1)), np.cumsum(x, axis=1)), axis=1)
    c = np.cumsum(s, axis=1)
    idx = np.arange(1, n - k + 2)
    j = idx.astype(float)
    values = (c[:, k + idx - 1] - c[:, [k - 1]] - j * s[:, [k - 1]]) / (j + 1.0)
    return values.max(axis=1)


def path_to_csv_row(path: Path) -> str:
    return ",".join(repr(float(v)) for v in path.increments)


def path_from_csv_row(row: str) -> Path:
    return Path([float(v) for v in row.strip().split(",") if v.strip()])


def paths_from_csv(lines: Iterable[str]) -> list[Path]:
    return [path_from_csv_row(line) for line in lines if line.strip()]
