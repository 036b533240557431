"""Increment laws: exact moments, lower tails, sampling and the decay-assumption checker.

Every law is centred. ShiftedPareto(alpha) is X = Y - alpha/(alpha - 1) with
P(Y > y) = y**(-alpha) for y >= 1, so -X is bounded above by 1/(alpha - 1).
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np
from scipy import integrate, special

from persistlab.constants.messages import (
    DECAY_ALPHA_POSITIVE,
    DECAY_GRID_POSITIVE,
    DECAY_NEGATIVE_KL,
    DECAY_NON_FINITE,
    DECAY_R_POSITIVE,
    DECAY_THETA_R,
    SPEC_ALPHA_RANGE,
    SPEC_BAD_PARAMETER,
    SPEC_DEGENERATE_TAIL,
    SPEC_LAMBDA_POSITIVE,
    SPEC_NEGATIVE_T,
    SPEC_NO_CERTIFIED_PARAMS,
    SPEC_SIGMA_POSITIVE,
    SPEC_UNKNOWN,
)
from persistlab.models import SpecError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

QUAD_RELATIVE_ERROR = 1e-10


class DistTag(str, Enum):
    """Supported increment laws."""

    RADEMACHER = "rademacher"
    GAUSSIAN = "gaussian"
    LAPLACE = "laplace"
    PARETO = "pareto"


@dataclass(frozen=True)
class DistributionSpec:
    """A named zero-mean increment law.

    ``param`` is sigma (gaussian), lambda (laplace) or alpha (pareto); rademacher
    ignores it.
    """

    tag: DistTag
    param: float = 0.0

    def __post_init__(self) -> None:
        p = self.param
        if self.tag is DistTag.GAUSSIAN and not (math.isfinite(p) and p > 0):
            raise SpecError(SPEC_SIGMA_POSITIVE.format(value=p))
        if self.tag is DistTag.LAPLACE and not (math.isfinite(p) and p > 0):
            raise SpecError(SPEC_LAMBDA_POSITIVE.format(value=p))
        if self.tag is DistTag.PARETO and not 1.0 < p < 2.0:
            raise SpecError(SPEC_ALPHA_RANGE.format(value=p))

    @property
    def params(self) -> tuple[float, ...]:
        return () if self.tag is DistTag.RADEMACHER else (self.param,)

    def __str__(self) -> str:
        return format_spec(self)


def rademacher() -> DistributionSpec:
    return DistributionSpec(DistTag.RADEMACHER)


def gaussian(sigma: float = 1.0) -> DistributionSpec:
    return DistributionSpec(DistTag.GAUSSIAN, float(sigma))


def laplace(lam: float = 1.0) -> DistributionSpec:
    return DistributionSpec(DistTag.LAPLACE, float(lam))


def shifted_pareto(alpha: float) -> DistributionSpec:
    return DistributionSpec(DistTag.PARETO, float(alpha))


def parse_spec(text: str) -> DistributionSpec:
    """Parse the short text form: rademacher, gaussian:1.0, laplace:1.0, pareto:1.5.

    A missing gaussian/laplace parameter defaults to 1.

    Raises:
        SpecError: Unknown tag or invalid parameter.
    """
    name, _, raw = text.strip().lower().partition(":")
    try:
        tag = DistTag(name)
    except ValueError:
        raise SpecError(SPEC_UNKNOWN.format(text=text)) from None
    if tag is DistTag.RADEMACHER:
        if raw:
            raise SpecError(SPEC_BAD_PARAMETER.format(value=raw, tag=tag.value))
        return rademacher()
    if not raw:
        if tag is DistTag.PARETO:
            raise SpecError(SPEC_BAD_PARAMETER.format(value="", tag=tag.value))
        raw = "1.0"
    try:
        value = float(raw)
    except ValueError:
        raise SpecError(SPEC_BAD_PARAMETER.format(value=raw, tag=tag.value)) from None
    return DistributionSpec(tag, value)


def format_spec(spec: DistributionSpec) -> str:
    """Inverse of parse_spec."""
    if spec.tag is DistTag.RADEMACHER:
        return spec.tag.value
    return f"{spec.tag.value}:{spec.param!r}"


def is_symmetric(spec: DistributionSpec) -> bool:
    return spec.tag is not DistTag.PARETO


def has_density(spec: DistributionSpec) -> bool:
    return spec.tag is not DistTag.RADEMACHER


def pareto_shift(alpha: float) -> float:
    """E[Y] = alpha / (alpha - 1)."""
    return alpha / (alpha - 1.0)


def sample(
    spec: DistributionSpec, stream: np.random.Generator, size: Optional[Union[int, tuple]] = None
) -> ArrayLike:
    """Draw from the law using ``stream``.

    ShiftedPareto uses the inverse transform Y = U**(-1/alpha) with U uniform on (0, 1].
    """
    tag = spec.tag
    if tag is DistTag.RADEMACHER:
        draw = 2.0 * stream.integers(0, 2, size=size) - 1.0
    elif tag is DistTag.GAUSSIAN:
        draw = stream.normal(0.0, spec.param, size=size)
    elif tag is DistTag.LAPLACE:
        draw = stream.laplace(0.0, 1.0 / spec.param, size=size)
    else:
        alpha = spec.param
        u = 1.0 - stream.random(size=size)
        draw = u ** (-1.0 / alpha) - pareto_shift(alpha)
    return float(draw) if size is None else draw


def mean_abs(spec: DistributionSpec) -> float:
    """E|X_1| in closed form."""
    tag = spec.tag
    if tag is DistTag.RADEMACHER:
        return 1.0
    if tag is DistTag.GAUSSIAN:
        return spec.param * math.sqrt(2.0 / math.pi)
    if tag is DistTag.LAPLACE:
        return 1.0 / spec.param
    alpha = spec.param
    m = pareto_shift(alpha)
    # E(X)^+ = int_m^inf y^-alpha dy, doubled because the mean is zero
    return 2.0 * m ** (1.0 - alpha) / (alpha - 1.0)


def lower_edge(spec: DistributionSpec) -> float:
    """Smallest t with P(-X_1 > t) = 0 (inf for unbounded laws)."""
    if spec.tag is DistTag.RADEMACHER:
        return 1.0
    if spec.tag is DistTag.PARETO:
        return 1.0 / (spec.param - 1.0)
    return math.inf


def _check_non_negative(t: ArrayLike) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise SpecError(SPEC_NEGATIVE_T.format(value=t))
    return arr


def _unwrap(value: np.ndarray, like: ArrayLike) -> ArrayLike:
    return float(value) if np.ndim(like) == 0 else value


def lower_tail(spec: DistributionSpec, t: ArrayLike) -> ArrayLike:
    """P(-X_1 > t) for t >= 0; exact 0.0 beyond the support."""
    arr = _check_non_negative(t)
    tag = spec.tag
    if tag is DistTag.RADEMACHER:
        out = np.where(arr < 1.0, 0.5, 0.0)
    elif tag is DistTag.GAUSSIAN:
        out = special.ndtr(-arr / spec.param)
    elif tag is DistTag.LAPLACE:
        out = 0.5 * np.exp(-spec.param * arr)
    else:
        alpha = spec.param
        w = pareto_shift(alpha) - arr
        inside = w > 1.0
        safe = np.where(inside, w, 2.0)
        out = np.where(inside, -np.expm1(-alpha * np.log(safe)), 0.0)
    return _unwrap(out, t)


def cdf(spec: DistributionSpec, x: ArrayLike) -> ArrayLike:
    """P(X_1 <= x)."""
    arr = np.asarray(x, dtype=float)
    tag = spec.tag
    if tag is DistTag.RADEMACHER:
        out = np.where(arr < -1.0, 0.0, np.where(arr < 1.0, 0.5, 1.0))
    elif tag is DistTag.GAUSSIAN:
        out = special.ndtr(arr / spec.param)
    elif tag is DistTag.LAPLACE:
        lam = spec.param
        left = 0.5 * np.exp(lam * np.minimum(arr, 0.0))
        out = np.where(arr < 0, left, 1.0 - 0.5 * np.exp(-lam * np.maximum(arr, 0.0)))
    else:
        alpha = spec.param
        y = arr + pareto_shift(alpha)
        out = np.where(y > 1.0, -np.expm1(-alpha * np.log(np.maximum(y, 1.0))), 0.0)
    return _unwrap(out, x)


def tail_integral(spec: DistributionSpec, t: float, method: str = "closed") -> float:
    """g(t) = int_0^inf P(-X_1 > t + u) du = E[(-X_1 - t)^+].

    Args:
        spec: Increment law.
        t: Non-negative offset.
        method: "closed" for the closed form, "quad" for adaptive quadrature.
    """
    _check_non_negative(t)
    t = float(t)
    if method == "quad":
        return _tail_integral_quad(spec, t)
    tag = spec.tag
    if tag is DistTag.RADEMACHER:
        return 0.5 * max(1.0 - t, 0.0)
    if tag is DistTag.GAUSSIAN:
        sigma = spec.param
        z = t / sigma
        density = math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
        return sigma * density - t * float(special.ndtr(-z))
    if tag is DistTag.LAPLACE:
        lam = spec.param
        return 0.5 * math.exp(-lam * t) / lam
    alpha = spec.param
    top = pareto_shift(alpha) - t
    if top <= 1.0:
        return 0.0
    # int_1^top (1 - w^-alpha) dw
    return (top - 1.0) - (top ** (1.0 - alpha) - 1.0) / (1.0 - alpha)


def _tail_integral_quad(spec: DistributionSpec, t: float) -> float:
    edge = lower_edge(spec)
    if t >= edge:
        return 0.0
    upper = edge - t if math.isfinite(edge) else np.inf
    value, _ = integrate.quad(
        lambda u: lower_tail(spec, t + u), 0.0, upper, epsrel=QUAD_RELATIVE_ERROR, limit=200
    )
    return float(value)


def tail_mass(spec: DistributionSpec, a: float, b: float) -> float:
    """int_a^b P(-X_1 > u) du by adaptive quadrature."""
    edge = lower_edge(spec)
    hi = min(b, edge)
    if hi <= a:
        return 0.0
    value, _ = integrate.quad(lambda u: lower_tail(spec, u), a, hi, epsrel=QUAD_RELATIVE_ERROR)
    return float(value)


def decay_alpha(spec: DistributionSpec, r: float) -> float:
    """alpha = -log P(-X_1 > r).

    Raises:
        SpecError: P(-X_1 > r) is zero.
    """
    tail = lower_tail(spec, r)
    if tail <= 0.0:
        raise SpecError(SPEC_DEGENERATE_TAIL.format(r=r, spec=format_spec(spec)))
    return -math.log(tail)


@dataclass(frozen=True)
class DecayParams:
    """Constants of the decay assumption plus the derived alpha."""

    K: float
    L: float
    r: float
    theta: float
    alpha: float

    def __post_init__(self) -> None:
        if self.K < 0 or self.L < 0:
            raise SpecError(DECAY_NEGATIVE_KL.format(K=self.K, L=self.L))
        if not self.r > 0:
            raise SpecError(DECAY_R_POSITIVE.format(r=self.r))
        if not self.theta * self.r > 1.0:
            raise SpecError(DECAY_THETA_R.format(theta=self.theta, r=self.r))
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise SpecError(DECAY_ALPHA_POSITIVE.format(alpha=self.alpha))

    @classmethod
    def for_spec(
        cls, spec: DistributionSpec, K: float, L: float, theta: float, r: float
    ) -> "DecayParams":
        alpha = decay_alpha(spec, r)
        return cls(K=float(K), L=float(L), r=float(r), theta=float(theta), alpha=alpha)

    def to_dict(self) -> dict[str, float]:
        return {"K": self.K, "L": self.L, "r": self.r, "theta": self.theta, "alpha": self.alpha}


def certified_params(spec: DistributionSpec) -> DecayParams:
    """Decay parameters documented to pass check_decay on the default grid."""
    tag = spec.tag
    if tag is DistTag.LAPLACE:
        lam = spec.param
        return DecayParams.for_spec(spec, K=2.0, L=0.0, theta=3.0 * lam, r=1.0 / lam)
    if tag is DistTag.RADEMACHER:
        return DecayParams.for_spec(spec, K=0.0, L=2.0, theta=2.0, r=0.6)
    if tag is DistTag.GAUSSIAN:
        sigma = spec.param
        return DecayParams.for_spec(spec, K=0.0, L=1000.0, theta=2.0 / sigma, r=sigma)
    if tag is DistTag.PARETO:
        edge = lower_edge(spec)
        r = edge / 2.0
        theta = 2.0 / r
        # geometric term >= 1 on the whole support of -X_1
        L = math.ceil(lower_tail(spec, r) ** (-theta * edge))
        return DecayParams.for_spec(spec, K=0.0, L=float(L), theta=theta, r=r)
    raise SpecError(SPEC_NO_CERTIFIED_PARAMS.format(spec=format_spec(spec)))


@dataclass(frozen=True, eq=False)
class GridSpec:
    """(t, s) evaluation grid for the decay checker."""

    t_values: np.ndarray = field(repr=False)
    s_values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if np.any(np.asarray(self.t_values) <= 0) or np.any(np.asarray(self.s_values) <= 0):
            raise SpecError(DECAY_GRID_POSITIVE)

    @property
    def size(self) -> int:
        return len(self.t_values) * len(self.s_values)

    def describe(self) -> str:
        return (
            f"{len(self.t_values)}x{len(self.s_values)} over "
            f"[{float(np.min(self.t_values)):g}, {float(np.max(self.t_values)):g}]^2"
        )


def default_grid(points: int = 200, lo: float = 1e-2, hi: float = 20.0) -> GridSpec:
    """Logarithmic grid, ``points`` per axis over [lo, hi]."""
    axis = np.geomspace(lo, hi, points)
    return GridSpec(t_values=axis, s_values=axis)


@dataclass(frozen=True)
class DecayReport:
    """Largest violation of the decay inequality seen on a grid.

    ``max_violation <= 0`` means no violation was found; it is not a proof.
    """

    spec: str
    params: DecayParams
    max_violation: float
    worst_t: float
    worst_s: float
    grid: str
    points: int

    @property
    def holds(self) -> bool:
        return self.max_violation <= 0.0

    def to_dict(self) -> dict:
        return {
            "spec": self.spec,
            "params": self.params.to_dict(),
            "max_violation": self.max_violation,
            "worst_t": self.worst_t,
            "worst_s": self.worst_s,
            "grid": self.grid,
            "points": self.points,
            "holds": self.holds,
        }


def check_decay(
    spec: DistributionSpec, params: DecayParams, grid: Optional[GridSpec] = None
) -> DecayReport:
    """Max over the grid of P(-X>t+s) - K P(-X>t) P(-X>s) - L P(-X>r)^(theta (t+s)).

    Differences within a few ulps of the larger side are rounding noise and count
    as zero, so exact identities (Laplace with L = 0) report 0.

    Raises:
        SpecError: A tail evaluation is not finite.
    """
    grid = grid or default_grid()
    t = np.asarray(grid.t_values, dtype=float)[:, None]
    s = np.asarray(grid.s_values, dtype=float)[None, :]
    u = t + s
    lhs = np.asarray(lower_tail(spec, u))
    product = np.asarray(lower_tail(spec, t)) * np.asarray(lower_tail(spec, s))
    rhs = params.K * product + params.L * np.exp(-params.theta * params.alpha * u)
    violation = lhs - rhs
    if not np.all(np.isfinite(violation)):
        bad = np.argwhere(~np.isfinite(violation))[0]
        raise SpecError(
            DECAY_NON_FINITE.format(t=float(t[bad[0], 0]), s=float(s[0, bad[1]]))
        )
    noise = 8.0 * np.finfo(float).eps * np.maximum(np.abs(lhs), np.abs(rhs))
    violation = np.where(np.abs(violation) <= noise, 0.0, violation)
    i, j = np.unravel_index(int(np.argmax(violation)), violation.shape)
    report = DecayReport(
        spec=format_spec(spec),
        params=params,
        max_violation=float(violation[i, j]),
        worst_t=float(t[i, 0]),
        worst_s=float(s[0, j]),
        grid=grid.describe(),
        points=grid.size,
    )
    level = logging.INFO if report.holds else logging.WARNING
    logger.log(level, "Decay check for %s: max violation %.3e", report.spec, report.max_violation)
    return report


def stable_exponent(alpha: float) -> float:
    """gamma = (1 - 1/alpha) / 2, the persistence exponent for Pareto(alpha) increments."""
    if not 1.0 < alpha < 2.0:
        raise SpecError(SPEC_ALPHA_RANGE.format(value=alpha))
    return (1.0 - 1.0 / alpha) / 2.0
