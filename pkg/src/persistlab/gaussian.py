"""Integrated Brownian motion and the Gaussian iterated-sum comparison.

Y(t) is the integral of a Brownian motion B over [0, t]. For standard Gaussian
increments the iterated sums S2_k have E[S2_k S2_m] = k(k+1)(3m-k+1)/6, while
E[Y(k) Y(m)] = k^2(3m-k)/6 (m >= k). The rescaled Z(k) = z_scale(k) Y(k) matches
the variances of S2_k, and the ratio f(m, k) of the two covariances is at least 1,
which gives P(max_k Y(k) <= 1) <= P(max_k Z(k) < 2) <= p^(2)_n(2).
"""

import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence

import mpmath
import numpy as np

from persistlab.constants.messages import (
    COV_ORDERING,
    IBM_DT_RANGE,
    IBM_T_MULTIPLE,
    IBM_T_POSITIVE,
)
from persistlab.distributions import gaussian
from persistlab.models import Estimate, Strictness
from persistlab.montecarlo import (
    STEP_CHUNK,
    Comparison,
    FitResult,
    Purpose,
    RunConfig,
    bernoulli_estimate,
    block_stream,
    check_budget,
    config_digest,
    estimate_persistence,
    fit_exponent,
    run_blocks,
)

logger = logging.getLogger(__name__)

MAX_DT = 0.05
MCKEAN_DIGITS = 30


def _check_order(k: int, m: int) -> None:
    if not m >= k >= 1:
        raise ValueError(COV_ORDERING.format(k=k, m=m))


def cov_ibm(k: int, m: int) -> Fraction:
    """E[Y(k) Y(m)] = k^2 (3m - k) / 6 for m >= k >= 1."""
    _check_order(k, m)
    return Fraction(k * k * (3 * m - k), 6)


def cov_s2(k: int, m: int) -> Fraction:
    """E[S2_k S2_m] = k (k+1) (3m - k + 1) / 6 for m >= k >= 1, unit-variance steps."""
    _check_order(k, m)
    return Fraction(k * (k + 1) * (3 * m - k + 1), 6)


def z_scale_squared(k: int) -> Fraction:
    """(1 + 1/k)(1 + 1/(2k))."""
    _check_order(k, k)
    return Fraction((k + 1) * (2 * k + 1), 2 * k * k)


def z_scale(k: int) -> float:
    return math.sqrt(z_scale_squared(k))


def cov_ratio_squared(m: int, k: int) -> Fraction:
    """f(m, k)^2, exact. f is symmetric, so the arguments may come in either order."""
    k, m = min(k, m), max(k, m)
    ibm = cov_ibm(k, m)
    return cov_s2(k, m) ** 2 / (z_scale_squared(m) * z_scale_squared(k) * ibm * ibm)


def cov_ratio(m: int, k: int) -> float:
    """f(m, k) = E[S2_m S2_k] / E[Z(m) Z(k)]."""
    return math.sqrt(cov_ratio_squared(m, k))


@dataclass(frozen=True)
class SlepianReport:
    """Exact checks of the covariance comparison for 1 <= k <= m <= k_max."""

    k_max: int
    pairs: int
    diagonal_failures: tuple[int, ...]
    ratio_failures: tuple[tuple[int, int], ...]
    monotone_failures: tuple[tuple[int, int], ...]

    @property
    def passed(self) -> bool:
        return not (self.diagonal_failures or self.ratio_failures or self.monotone_failures)

    def to_dict(self) -> dict[str, Any]:
        return {
            "k_max": self.k_max,
            "pairs": self.pairs,
            "diagonal_failures": list(self.diagonal_failures),
            "ratio_failures": [list(p) for p in self.ratio_failures],
            "monotone_failures": [list(p) for p in self.monotone_failures],
            "passed": self.passed,
        }


def slepian_check(k_max: int = 512) -> SlepianReport:
    """f(k, k) = 1, f(m, k) >= 1 and f(m + 1, k) >= f(m, k) in exact arithmetic.

    Also checks the variance identity k(k+1)(2k+1)/6 = z_scale(k)^2 k^3 / 3.
    """
    started = time.perf_counter()
    diagonal, ratio, monotone = [], [], []
    pairs = 0
    for k in range(1, k_max + 1):
        variance = Fraction(k * (k + 1) * (2 * k + 1), 6)
        if variance != z_scale_squared(k) * cov_ibm(k, k) or cov_ratio_squared(k, k) != 1:
            diagonal.append(k)
        previous = Fraction(1)
        for m in range(k + 1, k_max + 1):
            current = cov_ratio_squared(m, k)
            pairs += 1
            if current < 1:
                ratio.append((m, k))
            if current < previous:
                monotone.append((m, k))
            previous = current
    report = SlepianReport(
        k_max=k_max,
        pairs=pairs,
        diagonal_failures=tuple(diagonal),
        ratio_failures=tuple(ratio),
        monotone_failures=tuple(monotone),
    )
    logger.info(
        f"Covariance comparison to k={k_max}: {pairs} pairs, passed={report.passed} "
        f"({time.perf_counter() - started:.2f}s)"
    )
    return report


def mckean_constant() -> float:
    """3 Gamma(5/4) / (4 pi sqrt(2 sqrt(2 pi)))."""
    with mpmath.workdps(MCKEAN_DIGITS):
        value = 3 * mpmath.gamma(mpmath.mpf(5) / 4) / (
            4 * mpmath.pi * mpmath.sqrt(2 * mpmath.sqrt(2 * mpmath.pi))
        )
        return float(value)


def mckean_constant_reflection() -> float:
    """The same constant with Gamma(5/4) = pi sqrt(2) / (4 Gamma(3/4))."""
    with mpmath.workdps(MCKEAN_DIGITS):
        gamma_54 = mpmath.pi * mpmath.sqrt(2) / (4 * mpmath.gamma(mpmath.mpf(3) / 4))
        value = 3 * gamma_54 / (4 * mpmath.pi * mpmath.sqrt(2 * mpmath.sqrt(2 * mpmath.pi)))
        return float(value)


def _step_factor(h: float) -> np.ndarray:
    """Cholesky factor of Cov(dB, int_0^h (B(s) - B(0)) ds) = [[h, h^2/2], [h^2/2, h^3/3]]."""
    return np.linalg.cholesky(np.array([[h, h * h / 2.0], [h * h / 2.0, h**3 / 3.0]]))


def _ibm_block(
    rng: np.random.Generator,
    size: int,
    steps: int,
    h: float,
    level: float,
    scales: Optional[np.ndarray] = None,
) -> tuple[int, int]:
    """Survivors of max Y <= level and, with ``scales``, of max scales_k Y_k < 2 level.

    Y is observed at multiples of h. A path is dropped once no tracked event can
    still hold.
    """
    factor = _step_factor(h)
    alive = np.arange(size)
    b = np.zeros(size)
    y = np.zeros(size)
    peak = np.full(size, -np.inf)
    scaled_peak = np.full(size, -np.inf)
    k0 = 0
    while k0 < steps and alive.size:
        m = min(STEP_CHUNK, steps - k0)
        z = rng.standard_normal((alive.size, m, 2))
        db = factor[0, 0] * z[..., 0]
        di = factor[1, 0] * z[..., 0] + factor[1, 1] * z[..., 1]
        b_path = b[:, None] + np.cumsum(db, axis=1)
        b_before = b_path - db
        y_path = y[:, None] + np.cumsum(h * b_before + di, axis=1)
        b, y = b_path[:, -1], y_path[:, -1]

        peak[alive] = np.maximum(peak[alive], y_path.max(axis=1))
        if scales is None:
            keep = peak[alive] <= level
        else:
            z_path = y_path * scales[None, k0 : k0 + m]
            scaled_peak[alive] = np.maximum(scaled_peak[alive], z_path.max(axis=1))
            keep = scaled_peak[alive] < 2.0 * level
        alive, b, y = alive[keep], b[keep], y[keep]
        k0 += m
    return int(np.count_nonzero(peak <= level)), int(np.count_nonzero(scaled_peak < 2.0 * level))


def _ibm_steps(T: float, dt: float) -> int:
    if not 0.0 < dt <= MAX_DT:
        raise ValueError(IBM_DT_RANGE.format(dt=dt))
    if not T > 0:
        raise ValueError(IBM_T_POSITIVE.format(T=T))
    steps = round(T / dt)
    if steps < 1 or not math.isclose(steps * dt, T, rel_tol=1e-9, abs_tol=1e-12):
        raise ValueError(IBM_T_MULTIPLE.format(T=T, dt=dt))
    return steps


def simulate_ibm_persistence(
    T: float, dt: float, paths: int, seed: int, workers: int = 1, level: float = 1.0
) -> Estimate:
    """P(max of Y on the grid dt, 2 dt, ..., T <= level).

    (B, Y) advance by their exact joint Gaussian law over each step.

    Raises:
        ValueError: dt outside (0, 0.05] or T not a positive multiple of dt.
        BudgetError: paths x T/dt beyond the configured budget.
    """
    steps = _ibm_steps(T, dt)
    check_budget(paths, steps, workers)
    started = time.perf_counter()

    def block(b: int, size: int) -> int:
        rng = block_stream(seed, Purpose.IBM, b)
        return _ibm_block(rng, size, steps, dt, level)[0]

    survivors = sum(run_blocks(block, paths, workers))
    digest = config_digest(
        {"ibm": "continuous", "T": T, "dt": dt, "level": level, "paths": paths, "seed": seed}
    )
    estimate = bernoulli_estimate(survivors, paths, seed, steps, digest)
    logger.info(
        f"IBM persistence T={T:g} dt={dt:g}: {estimate.value:.5g} +/- {estimate.stderr:.2g} "
        f"({time.perf_counter() - started:.2f}s)"
    )
    return estimate


@dataclass(frozen=True)
class GridPersistence:
    """P(max_k Y(k) <= level) and P(max_k Z(k) < 2 level) on one path set."""

    n: int
    level: float
    ibm: Estimate
    scaled: Estimate

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "level": self.level,
            "ibm": self.ibm.to_dict(),
            "scaled": self.scaled.to_dict(),
        }


def ibm_grid_persistence(
    n: int, paths: int, seed: int, level: float = 1.0, workers: int = 1
) -> GridPersistence:
    """Y(1), ..., Y(n) sampled exactly, with Z(k) = z_scale(k) Y(k) on the same paths."""
    check_budget(paths, n, workers)
    scales = np.array([z_scale(k) for k in range(1, n + 1)])

    def block(b: int, size: int) -> tuple[int, int]:
        rng = block_stream(seed, Purpose.IBM_GRID, b)
        return _ibm_block(rng, size, n, 1.0, level, scales)

    parts = run_blocks(block, paths, workers)
    base = {"ibm": "grid", "n": n, "level": level, "paths": paths, "seed": seed}
    return GridPersistence(
        n=n,
        level=level,
        ibm=bernoulli_estimate(
            sum(p[0] for p in parts), paths, seed, n, config_digest({**base, "event": "Y"})
        ),
        scaled=bernoulli_estimate(
            sum(p[1] for p in parts), paths, seed, n, config_digest({**base, "event": "Z"})
        ),
    )


@dataclass(frozen=True)
class ChainReport:
    """P(max Y(k) <= 1) <= P(max Z(k) < 2) <= p^(2)_n(2), the last with an allowance."""

    n: int
    grid: GridPersistence
    walk: Estimate
    comparison: Comparison

    @property
    def holds(self) -> bool:
        return self.grid.ibm.value <= self.grid.scaled.value and self.comparison.holds

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "grid": self.grid.to_dict(),
            "walk": self.walk.to_dict(),
            "comparison": self.comparison.to_dict(),
            "holds": self.holds,
        }


def slepian_chain_report(n: int, paths: int, seed: int, workers: int = 1) -> ChainReport:
    """Both ends of the comparison chain, from independent simulations."""
    grid = ibm_grid_persistence(n, paths, seed, workers=workers)
    walk = estimate_persistence(
        RunConfig(
            spec=gaussian(1.0),
            n=n,
            paths=paths,
            seed=seed,
            order=2,
            strictness=Strictness.STRICT,
            y=2.0,
            workers=workers,
        )
    )
    comparison = Comparison(
        name="slepian-chain",
        n=n,
        lhs=grid.scaled.value,
        rhs=walk.value,
        stderr=math.hypot(grid.scaled.stderr, walk.stderr),
        relation="<=",
    )
    report = ChainReport(n=n, grid=grid, walk=walk, comparison=comparison)
    level = logging.INFO if report.holds else logging.WARNING
    logger.log(
        level,
        f"Comparison chain n={n}: {grid.ibm.value:.4g} <= {grid.scaled.value:.4g} "
        f"<= {walk.value:.4g}",
    )
    return report


def ibm_scaling(
    T_values: Sequence[float], dt: float, paths: int, seed: int, workers: int = 1
) -> tuple[list[tuple[float, Estimate]], FitResult]:
    """Persistence at each horizon and the fitted exponent of T."""
    rows = [(T, simulate_ibm_persistence(T, dt, paths, seed, workers)) for T in T_values]
    fit = fit_exponent([(T, e.value, e.stderr, e.paths) for T, e in rows])
    return rows, fit


def discretization_check(
    T: float, dt: float, paths: int, seed: int, workers: int = 1
) -> Comparison:
    """Estimates at dt and dt/2 agree within the allowance."""
    coarse = simulate_ibm_persistence(T, dt, paths, seed, workers)
    fine = simulate_ibm_persistence(T, dt / 2.0, paths, seed, workers)
    return Comparison(
        name="ibm-discretization",
        n=_ibm_steps(T, dt),
        lhs=coarse.value,
        rhs=fine.value,
        stderr=math.hypot(coarse.stderr, fine.stderr),
        relation="==",
    )
