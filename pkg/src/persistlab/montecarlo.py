"""Deterministic block-parallel Monte Carlo.

Paths are grouped into fixed blocks of ``BLOCK_PATHS``. Block b of a given purpose
draws from a Philox stream keyed by (root seed, purpose, b), so an estimate is a
pure function of its configuration and never of the worker count. Per-block
accumulators are merged in block order.

Persistence kernels stop simulating a path once its running maximum exceeds the
largest threshold of interest. Two calls therefore share paths exactly when they
share (seed, purpose, cutoff); ``persistence_sweep`` evaluates many thresholds on
one path set.
"""

import hashlib
import json
import logging
import math
import time
from dataclasses import dataclass, field, replace
from enum import IntEnum
from functools import reduce
from typing import Any, Callable, Optional, Sequence, TypeVar, Union

import numpy as np
from scipy import optimize

from persistlab import walks
from persistlab.config import Config
from persistlab.constants.messages import (
    FIT_NON_POSITIVE,
    FIT_TOO_FEW_POINTS,
    MC_CHAIN_N,
    MC_CONVOLUTION_KIND,
    MC_CORPUS_RANGE,
    MC_MARGINAL_RANGE,
    MC_N_NEGATIVE,
    MC_ORDER,
    MC_PATHS_POSITIVE,
    MC_THRESHOLD_NEGATIVE,
    MC_WORKERS_POSITIVE,
    SPEC_NOT_SYMMETRIC,
)
from persistlab.distributions import (
    DistributionSpec,
    DistTag,
    format_spec,
    is_symmetric,
    mean_abs,
    sample,
)
from persistlab.exact import argmax_law_exact, double_factorial, order1_table
from persistlab.models import Estimate, FitError, SpecError, Strictness
from persistlab.services.pool import BlockPool
from persistlab.utils.budget import current_step_budget

logger = logging.getLogger(__name__)

T = TypeVar("T")

BLOCK_PATHS = Config.BLOCK_PATHS
STEP_CHUNK = Config.STEP_CHUNK
ALLOWANCE_SE = Config.MC_ALLOWANCE_SE

# Fits ignore points with fewer expected surviving paths than this
MIN_FIT_EVENTS = 100

# Largest increment matrix materialised at once by the Y-statistic kernels
MATRIX_CELLS = 1 << 20


class Purpose(IntEnum):
    """Stream tags; each estimator draws from its own family of block streams."""

    PERSISTENCE = 1
    MEAN_ABS = 2
    ARGMAX = 3
    CONVOLUTION_LEFT = 4
    CONVOLUTION_RIGHT = 5
    MARGINAL = 6
    MAXIMAL = 7
    MOMENTS = 8
    CORPUS = 9
    IBM = 10
    IBM_GRID = 11


def config_digest(payload: dict[str, Any]) -> str:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class RunConfig:
    """Inputs of one Monte Carlo estimate.

    ``workers`` is excluded from the digest: it cannot change the result.
    """

    spec: DistributionSpec
    n: int
    paths: int
    seed: int
    order: int = 1
    strictness: Strictness = Strictness.STRICT
    y: float = 0.0
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "strictness", Strictness(self.strictness))
        if self.paths < 1:
            raise ValueError(MC_PATHS_POSITIVE.format(paths=self.paths))
        if self.n < 0:
            raise ValueError(MC_N_NEGATIVE.format(n=self.n))
        if not self.y >= 0:
            raise ValueError(MC_THRESHOLD_NEGATIVE.format(y=self.y))
        if self.workers < 1:
            raise ValueError(MC_WORKERS_POSITIVE.format(workers=self.workers))
        if self.order not in (1, 2):
            raise ValueError(MC_ORDER.format(order=self.order))

    def canonical(self) -> dict[str, Any]:
        return {
            "spec": format_spec(self.spec),
            "order": self.order,
            "strictness": self.strictness.value,
            "y": float(self.y),
            "n": self.n,
            "paths": self.paths,
            "seed": self.seed,
        }

    def to_dict(self) -> dict[str, Any]:
        return {**self.canonical(), "workers": self.workers}

    @property
    def digest(self) -> str:
        return config_digest(self.canonical())

    def with_(self, **changes: Any) -> "RunConfig":
        return replace(self, **changes)


def block_stream(seed: int, purpose: int, block: int) -> np.random.Generator:
    """Counter-based stream for one block."""
    sequence = np.random.SeedSequence(seed, spawn_key=(int(purpose), block))
    return np.random.Generator(np.random.Philox(sequence))


def block_sizes(paths: int) -> list[int]:
    full, rest = divmod(paths, BLOCK_PATHS)
    return [BLOCK_PATHS] * full + ([rest] if rest else [])


def run_blocks(func: Callable[[int, int], T], paths: int, workers: int = 1) -> list[T]:
    """Evaluate ``func(block, size)`` for every block, results in block order."""
    sizes = block_sizes(paths)
    return BlockPool(num_workers=workers).map(lambda b: func(b, sizes[b]), len(sizes))


def check_budget(paths: int, steps: int, workers: int = 1) -> None:
    current_step_budget().check(paths, steps, BLOCK_PATHS, STEP_CHUNK, workers)


@dataclass(frozen=True)
class Moments:
    """Count, mean and sum of squared deviations; merged with Chan's update."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, values: np.ndarray) -> "Moments":
        v = np.asarray(values, dtype=float)
        if v.size == 0:
            return cls()
        mean = float(v.mean())
        return cls(int(v.size), mean, float(np.sum((v - mean) ** 2)))

    def merge(self, other: "Moments") -> "Moments":
        if other.count == 0:
            return self
        if self.count == 0:
            return other
        count = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / count
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / count
        return Moments(count, mean, m2)

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0

    @property
    def stderr(self) -> float:
        return math.sqrt(self.variance / self.count) if self.count else 0.0


def merge_moments(parts: Sequence[Moments]) -> Moments:
    return reduce(Moments.merge, parts, Moments())


def bernoulli_estimate(
    successes: int, paths: int, seed: int, n: int, digest: str, ties: int = 0
) -> Estimate:
    p = successes / paths
    return Estimate(
        value=p,
        stderr=math.sqrt(p * (1.0 - p) / paths),
        paths=paths,
        seed=seed,
        n=n,
        config_digest=digest,
        ties=ties,
    )


def moment_estimate(moments: Moments, seed: int, n: int, digest: str) -> Estimate:
    return Estimate(
        value=moments.mean,
        stderr=moments.stderr,
        paths=moments.count,
        seed=seed,
        n=n,
        config_digest=digest,
    )


def _log_estimate(label: str, cfg: RunConfig, estimate: Estimate, started: float) -> None:
    logger.info(
        f"{label} {format_spec(cfg.spec)} n={cfg.n}: {estimate.value:.6g} "
        f"+/- {estimate.stderr:.2g} ({estimate.paths} paths, {time.perf_counter() - started:.2f}s)"
    )


def _walk_block(
    spec: DistributionSpec,
    order: int,
    n: int,
    y: float,
    cutoff: float,
    rng: np.random.Generator,
    size: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Running maxima and exit times of S^(order) for one block.

    Returns:
        (peak, exit_strict, exit_weak): max_{1<=k<=n} S^(order)_k (exact while it
        stays <= cutoff), the first k with S^(order)_k >= y and the first k with
        S^(order)_k > y, exit times being n + 1 when the level is never reached.
    """
    peak = np.full(size, -np.inf)
    exit_strict = np.full(size, n + 1, dtype=np.int64)
    exit_weak = np.full(size, n + 1, dtype=np.int64)
    alive = np.arange(size)
    s = np.zeros(size)
    s2 = np.zeros(size)
    k0 = 0
    while k0 < n and alive.size:
        m = min(STEP_CHUNK, n - k0)
        partial = s[:, None] + np.cumsum(sample(spec, rng, (alive.size, m)), axis=1)
        if order == 2:
            stat = s2[:, None] + np.cumsum(partial, axis=1)
            s2 = stat[:, -1]
        else:
            stat = partial
        s = partial[:, -1]
        running = np.maximum.accumulate(stat, axis=1)

        for exits, hits in ((exit_strict, running >= y), (exit_weak, running > y)):
            pending = (exits[alive] > n) & hits[:, -1]
            rows = np.flatnonzero(pending)
            exits[alive[rows]] = k0 + np.argmax(hits[rows], axis=1) + 1

        peak[alive] = np.maximum(peak[alive], running[:, -1])
        keep = peak[alive] <= cutoff
        alive, s, s2 = alive[keep], s[keep], s2[keep]
        k0 += m
    return peak, exit_strict, exit_weak


def estimate_persistence(cfg: RunConfig) -> Estimate:
    """P(max_{1<=k<=n} S^(order)_k < y) (strict) or <= y (weak).

    Raises:
        BudgetError: paths x n beyond the configured budget.
        SimulationError: A block failed.
    """
    check_budget(cfg.paths, cfg.n, cfg.workers)
    started = time.perf_counter()
    strict = cfg.strictness is Strictness.STRICT

    def block(b: int, size: int) -> tuple[int, int]:
        rng = block_stream(cfg.seed, Purpose.PERSISTENCE, b)
        peak, _, _ = _walk_block(cfg.spec, cfg.order, cfg.n, cfg.y, cfg.y, rng, size)
        alive = peak < cfg.y if strict else peak <= cfg.y
        return int(np.count_nonzero(alive)), int(np.count_nonzero(peak == cfg.y))

    parts = run_blocks(block, cfg.paths, cfg.workers)
    survivors = sum(p[0] for p in parts)
    ties = sum(p[1] for p in parts)
    estimate = bernoulli_estimate(survivors, cfg.paths, cfg.seed, cfg.n, cfg.digest, ties)
    _log_estimate(f"p[{cfg.order},{cfg.strictness.value},y={cfg.y:g}]", cfg, estimate, started)
    return estimate


@dataclass(frozen=True)
class SweepRow:
    y: float
    strict: Estimate
    weak: Estimate

    def to_dict(self) -> dict[str, Any]:
        return {"y": self.y, "strict": self.strict.to_dict(), "weak": self.weak.to_dict()}


def persistence_sweep(cfg: RunConfig, thresholds: Sequence[float]) -> list[SweepRow]:
    """Strict and weak estimates at every threshold on one common path set.

    On a common path set the estimates are exactly monotone in y and strict never
    exceeds weak.
    """
    levels = sorted({float(y) for y in thresholds})
    if not levels or levels[0] < 0:
        raise ValueError(MC_THRESHOLD_NEGATIVE.format(y=levels[0] if levels else None))
    check_budget(cfg.paths, cfg.n, cfg.workers)
    cutoff = levels[-1]
    ys = np.asarray(levels)

    def block(b: int, size: int) -> tuple[np.ndarray, np.ndarray]:
        rng = block_stream(cfg.seed, Purpose.PERSISTENCE, b)
        peak, _, _ = _walk_block(cfg.spec, cfg.order, cfg.n, cutoff, cutoff, rng, size)
        strict = np.count_nonzero(peak[:, None] < ys[None, :], axis=0)
        weak = np.count_nonzero(peak[:, None] <= ys[None, :], axis=0)
        return strict, weak

    parts = run_blocks(block, cfg.paths, cfg.workers)
    strict_counts = np.sum([p[0] for p in parts], axis=0)
    weak_counts = np.sum([p[1] for p in parts], axis=0)
    rows = []
    for i, y in enumerate(levels):
        strict_cfg = cfg.with_(y=y, strictness=Strictness.STRICT)
        weak_cfg = cfg.with_(y=y, strictness=Strictness.WEAK)
        digest = {"sweep": levels}
        rows.append(
            SweepRow(
                y=y,
                strict=bernoulli_estimate(
                    int(strict_counts[i]),
                    cfg.paths,
                    cfg.seed,
                    cfg.n,
                    config_digest({**strict_cfg.canonical(), **digest}),
                ),
                weak=bernoulli_estimate(
                    int(weak_counts[i]),
                    cfg.paths,
                    cfg.seed,
                    cfg.n,
                    config_digest({**weak_cfg.canonical(), **digest}),
                ),
            )
        )
    logger.info(f"Persistence sweep over {len(levels)} thresholds at n={cfg.n}")
    return rows


@dataclass(frozen=True)
class SurvivalTable:
    """p̂_k and the weak counterpart for k = 0..n from one set of exit times."""

    n: int
    paths: int
    seed: int
    config_digest: str
    strict: tuple[float, ...]
    weak: tuple[float, ...]

    def stderr(self, values: Sequence[float]) -> list[float]:
        return [math.sqrt(p * (1.0 - p) / self.paths) for p in values]

    def rows(self) -> list[tuple[int, float, float, float, float]]:
        se_s, se_w = self.stderr(self.strict), self.stderr(self.weak)
        return [
            (k, self.strict[k], se_s[k], self.weak[k], se_w[k]) for k in range(self.n + 1)
        ]

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "paths": self.paths,
            "seed": self.seed,
            "config_digest": self.config_digest,
            "strict": list(self.strict),
            "weak": list(self.weak),
        }


def survival_table(cfg: RunConfig) -> SurvivalTable:
    """Estimates of p_k(y) and p̄_k(y) for every k <= n on the persistence paths."""
    check_budget(cfg.paths, cfg.n, cfg.workers)

    def block(b: int, size: int) -> tuple[np.ndarray, np.ndarray]:
        rng = block_stream(cfg.seed, Purpose.PERSISTENCE, b)
        _, exit_strict, exit_weak = _walk_block(
            cfg.spec, cfg.order, cfg.n, cfg.y, cfg.y, rng, size
        )
        return (
            np.bincount(exit_strict, minlength=cfg.n + 2),
            np.bincount(exit_weak, minlength=cfg.n + 2),
        )

    parts = run_blocks(block, cfg.paths, cfg.workers)
    strict_hist = np.sum([p[0] for p in parts], axis=0)
    weak_hist = np.sum([p[1] for p in parts], axis=0)
    # P(tau > k) = 1 - P(tau <= k)
    strict = 1.0 - np.cumsum(strict_hist)[: cfg.n + 1] / cfg.paths
    weak = 1.0 - np.cumsum(weak_hist)[: cfg.n + 1] / cfg.paths
    return SurvivalTable(
        n=cfg.n,
        paths=cfg.paths,
        seed=cfg.seed,
        config_digest=config_digest({**cfg.canonical(), "table": "survival"}),
        strict=tuple(float(v) for v in strict),
        weak=tuple(float(v) for v in weak),
    )


def _pair_counts(tau: np.ndarray, tau_other: np.ndarray, n: int) -> np.ndarray:
    # #{0 <= k <= n : tau > k and tau_other > n - k}
    hi = np.minimum(tau - 1, n)
    lo = np.maximum(n - tau_other + 1, 0)
    return np.maximum(hi - lo + 1, 0)


def convolution_estimate(cfg: RunConfig, kind: str = "mixed") -> Estimate:
    """Unbiased estimate of sum_{k=0}^{n} p_k q_{n-k}.

    ``q`` is p̄ for kind "mixed" and p for kind "strict". Path i of one stream
    supplies the strict exit time, path i of an independent stream the other one.
    """
    if kind not in ("mixed", "strict"):
        raise ValueError(MC_CONVOLUTION_KIND.format(kind=kind))
    check_budget(2 * cfg.paths, cfg.n, cfg.workers)
    started = time.perf_counter()
    n = cfg.n

    def block(b: int, size: int) -> Moments:
        left = block_stream(cfg.seed, Purpose.CONVOLUTION_LEFT, b)
        right = block_stream(cfg.seed, Purpose.CONVOLUTION_RIGHT, b)
        _, tau, _ = _walk_block(cfg.spec, cfg.order, n, cfg.y, cfg.y, left, size)
        _, tau_strict, tau_weak = _walk_block(cfg.spec, cfg.order, n, cfg.y, cfg.y, right, size)
        other = tau_weak if kind == "mixed" else tau_strict
        return Moments.of(_pair_counts(tau, other, n))

    moments = merge_moments(run_blocks(block, cfg.paths, cfg.workers))
    estimate = moment_estimate(
        moments, cfg.seed, n, config_digest({**cfg.canonical(), "convolution": kind})
    )
    _log_estimate(f"conv[{cfg.order},{kind}]", cfg, estimate, started)
    return estimate


def estimate_mean_abs_S(cfg: RunConfig) -> Estimate:
    """Sample mean of |S_n| with its standard error."""
    digest = config_digest({**cfg.canonical(), "quantity": "mean-abs"})
    if cfg.n == 0:
        return Estimate(0.0, 0.0, cfg.paths, cfg.seed, 0, digest)
    check_budget(cfg.paths, cfg.n, cfg.workers)
    started = time.perf_counter()

    def block(b: int, size: int) -> Moments:
        rng = block_stream(cfg.seed, Purpose.MEAN_ABS, b)
        s = np.zeros(size)
        for k0 in range(0, cfg.n, STEP_CHUNK):
            s += sample(cfg.spec, rng, (size, min(STEP_CHUNK, cfg.n - k0))).sum(axis=1)
        return Moments.of(np.abs(s))

    estimate = moment_estimate(
        merge_moments(run_blocks(block, cfg.paths, cfg.workers)), cfg.seed, cfg.n, digest
    )
    _log_estimate("E|S_n|", cfg, estimate, started)
    return estimate


@dataclass(frozen=True)
class ArgmaxLawReport:
    """Empirical law of the first argmax of (S_0, ..., S_n) against p_k p̄_{n-k}."""

    spec: str
    n: int
    paths: int
    frequencies: tuple[float, ...]
    reference: tuple[float, ...]

    @property
    def max_deviation(self) -> float:
        return max(abs(f - r) for f, r in zip(self.frequencies, self.reference))

    @property
    def max_z(self) -> float:
        worst = 0.0
        for f, r in zip(self.frequencies, self.reference):
            se = math.sqrt(r * (1.0 - r) / self.paths)
            if se > 0:
                worst = max(worst, abs(f - r) / se)
            elif f != r:
                return math.inf
        return worst

    def to_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec,
            "n": self.n,
            "paths": self.paths,
            "frequencies": list(self.frequencies),
            "reference": list(self.reference),
            "max_deviation": self.max_deviation,
            "max_z": self.max_z,
        }


def argmax_law(cfg: RunConfig) -> ArgmaxLawReport:
    """Compare the first-argmax law of a symmetric walk with p_k p̄_{n-k}.

    The reference is exact for Rademacher and the double-factorial product for laws
    with a density.

    Raises:
        SpecError: The law is not symmetric.
    """
    if not is_symmetric(cfg.spec):
        raise SpecError(SPEC_NOT_SYMMETRIC.format(spec=format_spec(cfg.spec)))
    check_budget(cfg.paths, cfg.n, cfg.workers)
    n = cfg.n

    def block(b: int, size: int) -> np.ndarray:
        rng = block_stream(cfg.seed, Purpose.ARGMAX, b)
        best = np.zeros(size)
        index = np.zeros(size, dtype=np.int64)
        s = np.zeros(size)
        for k0 in range(0, n, STEP_CHUNK):
            x = sample(cfg.spec, rng, (size, min(STEP_CHUNK, n - k0)))
            partial = s[:, None] + np.cumsum(x, axis=1)
            top = partial.max(axis=1)
            better = top > best
            best[better] = top[better]
            index[better] = k0 + np.argmax(partial[better], axis=1) + 1
            s = partial[:, -1]
        return np.bincount(index, minlength=n + 1)

    counts = np.sum(run_blocks(block, cfg.paths, cfg.workers), axis=0)
    if cfg.spec.tag is DistTag.RADEMACHER:
        reference = [float(v) for v in argmax_law_exact(order1_table(n), n)]
    else:
        reference = [float(double_factorial(k) * double_factorial(n - k)) for k in range(n + 1)]
    report = ArgmaxLawReport(
        spec=format_spec(cfg.spec),
        n=n,
        paths=cfg.paths,
        frequencies=tuple(float(c) / cfg.paths for c in counts),
        reference=tuple(reference),
    )
    logger.info(f"Argmax law {report.spec} n={n}: max deviation {report.max_deviation:.3g}")
    return report


@dataclass(frozen=True)
class MarginalReport:
    """Estimate of P(Y_{k,2} < 0) (or P(Y_{k,n} <= 0)) next to its persistence twin."""

    k: int
    n: int
    weak: bool
    observed: Estimate
    reference: Estimate

    @property
    def z(self) -> float:
        se = math.hypot(self.observed.stderr, self.reference.stderr)
        diff = self.observed.value - self.reference.value
        if se == 0:
            return 0.0 if diff == 0 else math.inf
        return diff / se

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "n": self.n,
            "weak": self.weak,
            "observed": self.observed.to_dict(),
            "reference": self.reference.to_dict(),
            "z": self.z,
        }


def _row_batches(size: int, width: int) -> list[tuple[int, int]]:
    step = max(1, MATRIX_CELLS // max(width, 1))
    return [(lo, min(lo + step, size)) for lo in range(0, size, step)]


def marginal_identity(cfg: RunConfig, k: int, weak: bool = False) -> MarginalReport:
    """P(Y_{k,2} < 0) = p^(2)_{k-1}, or with ``weak`` P(Y_{k,n} <= 0) = p̄^(2)_{n-k+1}.

    Both sides are estimated from independent streams.

    Raises:
        ValueError: k outside 2..n.
    """
    n = cfg.n
    if not 2 <= k <= n:
        raise ValueError(MC_MARGINAL_RANGE.format(k=k, n=n))
    width = n - k + 1 if weak else k
    check_budget(2 * cfg.paths, width, cfg.workers)

    def block(b: int, size: int) -> int:
        rng = block_stream(cfg.seed, Purpose.MARGINAL, b)
        hits = 0
        for lo, hi in _row_batches(size, width):
            x = sample(cfg.spec, rng, (hi - lo, width))
            if weak:
                hits += int(np.count_nonzero(walks.y_right_batch(x, 1) <= 0.0))
            else:
                hits += int(np.count_nonzero(walks.y_left_batch(x, k) < 0.0))
        return hits

    hits = sum(run_blocks(block, cfg.paths, cfg.workers))
    digest = config_digest({**cfg.canonical(), "marginal": k, "weak": weak})
    observed = bernoulli_estimate(hits, cfg.paths, cfg.seed, n, digest)
    if weak:
        twin = cfg.with_(n=n - k + 1, order=2, strictness=Strictness.WEAK, y=0.0)
    else:
        twin = cfg.with_(n=k - 1, order=2, strictness=Strictness.STRICT, y=0.0)
    reference = estimate_persistence(twin)
    report = MarginalReport(k=k, n=n, weak=weak, observed=observed, reference=reference)
    logger.info(f"Marginal identity k={k}: z={report.z:.2f}")
    return report


@dataclass(frozen=True)
class FitResult:
    """Fitted decay exponent gamma in p_n ~ C n^-gamma."""

    gamma: float
    stderr: float
    intercept: float
    points: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "gamma": self.gamma,
            "stderr": self.stderr,
            "intercept": self.intercept,
            "points": self.points,
        }


FitPoint = Union[Estimate, Sequence[float]]


def _fit_triplet(point: FitPoint) -> tuple[float, float, float, float]:
    if isinstance(point, Estimate):
        return float(point.n), point.value, point.stderr, float(point.paths)
    values = tuple(float(v) for v in point)
    return values[0], values[1], values[2], values[3] if len(values) > 3 else math.inf


def _log_linear(x: np.ndarray, intercept: float, slope: float) -> np.ndarray:
    return intercept + slope * x


def fit_exponent(points: Sequence[FitPoint], min_events: float = MIN_FIT_EVENTS) -> FitResult:
    """Weighted least squares of ln p̂ on ln n; gamma is minus the slope.

    Points are Estimates or (n, p̂, stderr[, paths]) tuples. Points with
    p̂ x paths below ``min_events`` are dropped. Weights are the relative errors
    stderr / p̂; when any of them is zero the fit is unweighted.

    Raises:
        FitError: Fewer than 3 usable points, or a non-positive n or p̂.
    """
    usable = [t for t in map(_fit_triplet, points) if t[1] * t[3] >= min_events]
    if len(usable) < 3:
        raise FitError(FIT_TOO_FEW_POINTS.format(count=len(usable)))
    n, p, se, _ = (np.asarray(column, dtype=float) for column in zip(*usable))
    if np.any(n < 1) or np.any(p <= 0):
        raise FitError(FIT_NON_POSITIVE)

    x, y = np.log(n), np.log(p)
    sigma = se / p
    if np.all(sigma > 0):
        params, cov = optimize.curve_fit(_log_linear, x, y, sigma=sigma, absolute_sigma=True)
    else:
        params, cov = optimize.curve_fit(_log_linear, x, y)
    result = FitResult(
        gamma=float(-params[1]),
        stderr=float(math.sqrt(max(cov[1, 1], 0.0))),
        intercept=float(params[0]),
        points=len(usable),
    )
    logger.info(
        f"Fitted gamma {result.gamma:.4f} +/- {result.stderr:.4f} on {result.points} points"
    )
    return result


@dataclass(frozen=True)
class Comparison:
    """lhs against rhs with a standard error for lhs - rhs.

    ``relation`` is "<=", ">=" or "=="; a comparison holds when the signed
    difference is within ``allowance_se`` standard errors of satisfying it.
    """

    name: str
    n: int
    lhs: float
    rhs: float
    stderr: float
    relation: str
    t: Optional[float] = None
    allowance_se: float = ALLOWANCE_SE

    @property
    def difference(self) -> float:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        slack = self.allowance_se * self.stderr
        if self.relation == "<=":
            return self.difference <= slack
        if self.relation == ">=":
            return self.difference >= -slack
        return abs(self.difference) <= slack

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "n": self.n,
            "t": self.t,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "stderr": self.stderr,
            "relation": self.relation,
            "allowance_se": self.allowance_se,
            "holds": self.holds,
        }


def _paired(
    name: str, n: int, lhs: np.ndarray, rhs: np.ndarray, relation: str, t: Optional[float] = None
) -> tuple:
    # per-block moments of lhs, rhs and their difference; merged later
    return name, n, relation, t, Moments.of(lhs), Moments.of(rhs), Moments.of(lhs - rhs)


def _merge_paired(parts: list[list[tuple]]) -> list[Comparison]:
    rows = []
    for items in zip(*parts):
        name, n, relation, t = items[0][:4]
        lhs = merge_moments([item[4] for item in items])
        rhs = merge_moments([item[5] for item in items])
        diff = merge_moments([item[6] for item in items])
        rows.append(Comparison(name, n, lhs.mean, rhs.mean, diff.stderr, relation, t))
    return rows


@dataclass(frozen=True)
class MaximalReport:
    """Maximal inequalities checked on one simulated path set."""

    spec: str
    n: int
    paths: int
    rows: tuple[Comparison, ...] = field(default_factory=tuple)

    @property
    def violations(self) -> list[Comparison]:
        return [row for row in self.rows if not row.holds]

    def to_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec,
            "n": self.n,
            "paths": self.paths,
            "rows": [row.to_dict() for row in self.rows],
            "violations": len(self.violations),
        }


def maximal_inequality_report(
    spec: DistributionSpec,
    n: int,
    t_grid: Sequence[float],
    paths: int,
    seed: int,
    workers: int = 1,
) -> MaximalReport:
    """Ottaviani and Montgomery-Smith inequalities and their moment forms.

    Checked per t: P(max|S_k| >= t) <= 9 P(|S_n| >= t/30) always, and for
    symmetric laws P(max S_k >= t) <= 2 P(S_n >= t). Moment forms:
    E max S_k <= 270 E|S_n|, and E max S_k <= E|S_n| for symmetric laws.
    """
    if n < 1:
        raise ValueError(MC_N_NEGATIVE.format(n=n))
    check_budget(paths, n, workers)
    symmetric = is_symmetric(spec)
    ts = [float(t) for t in t_grid]

    def block(b: int, size: int) -> list[tuple]:
        rng = block_stream(seed, Purpose.MAXIMAL, b)
        s = np.zeros(size)
        top = np.full(size, -np.inf)
        top_abs = np.zeros(size)
        for k0 in range(0, n, STEP_CHUNK):
            x = sample(spec, rng, (size, min(STEP_CHUNK, n - k0)))
            partial = s[:, None] + np.cumsum(x, axis=1)
            top = np.maximum(top, partial.max(axis=1))
            top_abs = np.maximum(top_abs, np.abs(partial).max(axis=1))
            s = partial[:, -1]
        rows = []
        for t in ts:
            if symmetric:
                rows.append(
                    _paired("ottaviani", n, (top >= t) * 1.0, 2.0 * (s >= t), "<=", t)
                )
            rhs = 9.0 * (np.abs(s) >= t / 30.0)
            rows.append(_paired("montgomery-smith", n, (top_abs >= t) * 1.0, rhs, "<=", t))
        rows.append(_paired("max-moment", n, top, 270.0 * np.abs(s), "<="))
        if symmetric:
            rows.append(_paired("max-moment-symmetric", n, top, np.abs(s), "<="))
        return rows

    rows = _merge_paired(run_blocks(block, paths, workers))
    report = MaximalReport(spec=format_spec(spec), n=n, paths=paths, rows=tuple(rows))
    level = logging.INFO if not report.violations else logging.WARNING
    logger.log(level, f"Maximal inequalities {report.spec} n={n}: {len(report.violations)} flagged")
    return report


def _range_block(spec: DistributionSpec, n: int, rng: np.random.Generator, size: int):
    # A_n - B_n = max_{k<=n} S_k - min_{2<=k<=n+1} S_k, from n + 1 increments
    s = np.zeros(size)
    top = np.full(size, -np.inf)
    bottom = np.full(size, np.inf)
    steps = n + 1
    for k0 in range(0, steps, STEP_CHUNK):
        m = min(STEP_CHUNK, steps - k0)
        partial = s[:, None] + np.cumsum(sample(spec, rng, (size, m)), axis=1)
        ks = np.arange(k0 + 1, k0 + m + 1)
        top = np.maximum(top, np.where(ks <= n, partial, -np.inf).max(axis=1))
        bottom = np.minimum(bottom, np.where(ks >= 2, partial, np.inf).min(axis=1))
        s = partial[:, -1]
    return top - bottom, top


def moment_identity(
    spec: DistributionSpec, n: int, paths: int, seed: int, workers: int = 1
) -> Comparison:
    """E[A_n - B_n] against 2 E[max_{1<=k<=n} S_k] on the same paths."""
    if n < 1:
        raise ValueError(MC_N_NEGATIVE.format(n=n))
    check_budget(paths, n + 1, workers)

    def block(b: int, size: int) -> list[tuple]:
        spread, top = _range_block(spec, n, block_stream(seed, Purpose.MOMENTS, b), size)
        return [_paired("range-identity", n, spread, 2.0 * top, "==")]

    (row,) = _merge_paired(run_blocks(block, paths, workers))
    logger.info(
        f"Range identity {format_spec(spec)} n={n}: "
        f"diff {row.difference:.4g} +/- {row.stderr:.2g}"
    )
    return row


def upper_chain_check(
    spec: DistributionSpec, n: int, paths: int, seed: int, workers: int = 1
) -> Comparison:
    """E[A_{n-1} - B_{n-1}] >= (E|X_1| / 2) sum_{k=0}^{n-2} p^(2)_k p̄^(2)_{n-2-k}.

    Both sides are Monte Carlo estimates from independent streams.
    """
    if n < 3:
        raise ValueError(MC_CHAIN_N.format(n=n))
    check_budget(paths, n, workers)

    def block(b: int, size: int) -> Moments:
        spread, _ = _range_block(spec, n - 1, block_stream(seed, Purpose.MOMENTS, b), size)
        return Moments.of(spread)

    lhs = merge_moments(run_blocks(block, paths, workers))
    conv = convolution_estimate(
        RunConfig(spec=spec, n=n - 2, paths=paths, seed=seed, order=2, workers=workers)
    )
    half = mean_abs(spec) / 2.0
    return Comparison(
        name="upper-chain",
        n=n,
        lhs=lhs.mean,
        rhs=half * conv.value,
        stderr=math.hypot(lhs.stderr, half * conv.stderr),
        relation=">=",
    )


@dataclass(frozen=True)
class CorpusReport:
    """Pathwise checks of the argmax-interval machinery on random paths."""

    spec: str
    paths: int
    pairs: int
    mismatches: int
    sum_indicator_violations: int
    range_violations: int
    covering_violations: int

    @property
    def passed(self) -> bool:
        return (
            self.mismatches
            + self.sum_indicator_violations
            + self.range_violations
            + self.covering_violations
        ) == 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec,
            "paths": self.paths,
            "pairs": self.pairs,
            "mismatches": self.mismatches,
            "sum_indicator_violations": self.sum_indicator_violations,
            "range_violations": self.range_violations,
            "covering_violations": self.covering_violations,
            "passed": self.passed,
        }


def _interval_mismatches(path: walks.Path, ts: np.ndarray) -> int:
    family = walks.interval_family(path)
    lo = np.array([iv.lo for iv in family])
    hi = np.array([iv.hi for iv in family])
    member = (lo[None, :] < ts[:, None]) & (ts[:, None] <= hi[None, :])
    s2 = np.concatenate(([0.0], np.cumsum(np.cumsum(path.increments))))
    brute = np.argmax((np.arange(s2.size) + 1.0)[None, :] * ts[:, None] + s2[None, :], axis=1)
    single = member.sum(axis=1) == 1
    agrees = member[np.arange(ts.size), brute]
    return int(np.count_nonzero(~(single & agrees)))


def path_corpus_check(
    spec: DistributionSpec,
    paths: int,
    seed: int,
    t_per_path: int = 100,
    n_min: int = 3,
    n_max: int = 50,
) -> CorpusReport:
    """Interval membership against brute-force argmax, plus the pathwise bounds.

    For each random path of length n in n_min..n_max and ``t_per_path`` random
    shifts t, the brute-force first argmax of (j + 1) t + S2_j must be the unique
    k with t in (lo_k, hi_k]. On the same paths:
    A_{n-1} - B_{n-1} >= the indicator sum, M_n - m_n >= (X_2 + ... + X_n)^-,
    Y_{n,2} + Y_{2,n} >= S_n - X_1 and M_n - m_n <= sum of interval lengths.
    """
    if not 3 <= n_min <= n_max:
        raise ValueError(MC_CORPUS_RANGE.format(n_min=n_min, n_max=n_max))
    rng = block_stream(seed, Purpose.CORPUS, 0)
    mismatches = indicator_bad = range_bad = covering_bad = 0
    for _ in range(paths):
        n = int(rng.integers(n_min, n_max + 1))
        path = walks.Path(sample(spec, rng, n))
        tol = 1e-9 * (1.0 + float(np.abs(path.increments).sum()))

        family = walks.interval_family(path)
        ends = [v for iv in family for v in (iv.lo, iv.hi) if math.isfinite(v)]
        ts = rng.uniform(min(ends) - 1.0, max(ends) + 1.0, t_per_path)
        mismatches += _interval_mismatches(path, ts)

        diag = walks.diagnostics(path)
        if diag.A - diag.B < walks.sum_indicator_bound(path) - tol:
            indicator_bad += 1
        y_left_n, _ = walks.y_stats(path, n)
        _, y_right_2 = walks.y_stats(path, 2)
        s = walks.partial_sums(path)
        tail = max(-(s[n] - s[1]), 0.0)
        if diag.M - diag.m < tail - tol or y_left_n + y_right_2 < s[n] - s[1] - tol:
            range_bad += 1
        covering = sum(walks.interval_length(path, k) for k in range(1, n))
        if diag.M - diag.m > covering + tol:
            covering_bad += 1

    report = CorpusReport(
        spec=format_spec(spec),
        paths=paths,
        pairs=paths * t_per_path,
        mismatches=mismatches,
        sum_indicator_violations=indicator_bad,
        range_violations=range_bad,
        covering_violations=covering_bad,
    )
    level = logging.INFO if report.passed else logging.WARNING
    logger.log(level, f"Path corpus {report.spec}: {report.pairs} pairs, passed={report.passed}")
    return report
