"""Constants and checks for the convolution and two-sided persistence bounds.

Exact inputs (Fractions) are compared in rational arithmetic; the two-sided
checks square both sides so that no square root is taken. Monte Carlo inputs
(Estimates) pass when the margin is above minus ``MC_ALLOWANCE_SE`` propagated
standard errors.
"""

import logging
import math
from fractions import Fraction
from typing import Optional, Sequence, Union

from persistlab.config import Config
from persistlab.constants.messages import (
    BOUND_MISSING_INPUT,
    BOUND_NON_POSITIVE,
    BOUND_NOT_CERTIFIED,
)
from persistlab.distributions import (
    DecayParams,
    DecayReport,
    DistributionSpec,
    certified_params,
    check_decay,
    format_spec,
    is_symmetric,
    mean_abs,
    rademacher,
)
from persistlab.exact import convolution_sequence, mean_abs_Sn_rademacher, order2_table
from persistlab.models import (
    BoundInputError,
    BoundReport,
    Estimate,
    Inequality,
    Number,
    Source,
    SpecError,
)
from persistlab.montecarlo import (
    RunConfig,
    convolution_estimate,
    estimate_mean_abs_S,
    estimate_persistence,
)

logger = logging.getLogger(__name__)

Input = Union[Number, Estimate]

MC_ALLOWANCE_SE = Config.MC_ALLOWANCE_SE


def c1_constant(symmetric: bool) -> float:
    """2 for symmetric laws, 6 sqrt(30) otherwise."""
    return 2.0 if symmetric else 6.0 * math.sqrt(30.0)


def c1_squared(symmetric: bool) -> Fraction:
    return Fraction(4) if symmetric else Fraction(1080)


def c2_constant(params: DecayParams) -> float:
    """K^2 + 2 L1 kappa^2.

    L1 = L (K/2 + 1/(theta alpha)) and kappa = e^alpha theta / (theta - 1/r).
    """
    l1 = params.L * (params.K / 2.0 + 1.0 / (params.theta * params.alpha))
    kappa = math.exp(params.alpha) * params.theta / (params.theta - 1.0 / params.r)
    return params.K**2 + 2.0 * l1 * kappa**2


def _squared(c: float) -> Fraction:
    for symmetric in (True, False):
        if c == c1_constant(symmetric):
            return c1_squared(symmetric)
    return Fraction(c) ** 2


def _split(name: str, value: Optional[Input]) -> tuple[Union[Fraction, float], float, bool]:
    """(value, stderr, from_simulation) for an exact number or an Estimate."""
    if value is None:
        raise BoundInputError(BOUND_MISSING_INPUT.format(name=name))
    if isinstance(value, Estimate):
        return value.value, value.stderr, True
    return Fraction(value), 0.0, False


def _positive(name: str, value: Optional[Input]) -> Fraction:
    if value is None:
        raise BoundInputError(BOUND_MISSING_INPUT.format(name=name))
    if value <= 0:
        raise BoundInputError(BOUND_NON_POSITIVE.format(name=name, value=value))
    return Fraction(value)


def _report(
    inequality: Inequality,
    n: int,
    lhs: Number,
    rhs: Number,
    margin: Number,
    constants: dict[str, float],
    stderr: float = 0.0,
    simulated: bool = False,
) -> BoundReport:
    if simulated:
        allowance = MC_ALLOWANCE_SE * stderr
        report = BoundReport(
            inequality=inequality,
            n=n,
            lhs=float(lhs),
            rhs=float(rhs),
            margin=float(margin),
            holds=float(margin) >= -allowance,
            constants=constants,
            source=Source.MONTECARLO,
            allowance=allowance,
        )
    else:
        report = BoundReport(
            inequality=inequality,
            n=n,
            lhs=lhs,
            rhs=rhs,
            margin=margin,
            holds=margin >= 0,
            constants=constants,
        )
    if not report.holds:
        logger.warning(
            f"{inequality.value} failed at n={n}: lhs={float(lhs):.6g} rhs={float(rhs):.6g}"
        )
    return report


def verify_upper_convolution(
    n: int,
    conv_lhs: Optional[Input],
    mean_abs_S: Optional[Input],
    mean_abs_X: Optional[Number],
    c1: float,
) -> BoundReport:
    """sum_k p_k p̄_{n-k} <= c1^2 E|S_{n+1}| / E|X_1|.

    Raises:
        BoundInputError: An input is missing or E|X_1| is not positive.
    """
    lhs, se_lhs, mc_lhs = _split("conv_lhs", conv_lhs)
    s, se_s, mc_s = _split("mean_abs_S", mean_abs_S)
    x = _positive("mean_abs_X", mean_abs_X)
    c_sq = _squared(c1)
    constants = {"c1": c1, "c1_squared": float(c_sq)}
    if mc_lhs or mc_s:
        factor = float(c_sq) / float(x)
        rhs = factor * float(s)
        return _report(
            Inequality.UPPER_CONVOLUTION,
            n,
            lhs=float(lhs),
            rhs=rhs,
            margin=rhs - float(lhs),
            stderr=math.hypot(se_lhs, factor * se_s),
            simulated=True,
            constants=constants,
        )
    rhs = c_sq * s / x
    return _report(
        Inequality.UPPER_CONVOLUTION,
        n,
        lhs=lhs,
        rhs=rhs,
        margin=rhs - lhs,
        constants=constants,
    )


def verify_lower_convolution(
    n: int,
    conv_strict: Optional[Input],
    mean_abs_S: Optional[Input],
    mean_abs_X: Optional[Number],
    c2: float,
    decay: Optional[DecayReport] = None,
) -> BoundReport:
    """sum_k p_k p_{n-k} >= (1/c2) E|S_{n+1}| / E|X_1|.

    Args:
        decay: Decay check backing ``c2``; a failed check refuses the bound.

    Raises:
        BoundInputError: Missing input, or the decay assumption is not certified.
    """
    if decay is not None and not decay.holds:
        raise BoundInputError(BOUND_NOT_CERTIFIED.format(spec=decay.spec))
    lhs, se_lhs, mc_lhs = _split("conv_strict", conv_strict)
    s, se_s, mc_s = _split("mean_abs_S", mean_abs_S)
    x = _positive("mean_abs_X", mean_abs_X)
    c = _positive("c2", c2)
    if mc_lhs or mc_s:
        factor = 1.0 / (float(c) * float(x))
        rhs = factor * float(s)
        return _report(
            Inequality.LOWER_CONVOLUTION,
            n,
            lhs=float(lhs),
            rhs=rhs,
            margin=float(lhs) - rhs,
            stderr=math.hypot(se_lhs, factor * se_s),
            simulated=True,
            constants={"c2": c2},
        )
    rhs = s / (c * x)
    return _report(
        Inequality.LOWER_CONVOLUTION, n, lhs=lhs, rhs=rhs, margin=lhs - rhs, constants={"c2": c2}
    )


def verify_two_sided(
    n: int,
    p_n: Optional[Input],
    mean_abs_S: Optional[Input],
    mean_abs_X: Optional[Number],
    c1: float,
    c2: float,
) -> tuple[BoundReport, BoundReport]:
    """(1/(4 c1 c2)) sqrt(q) <= p_n <= c1 sqrt(q) with q = E|S_{n+1}| / ((n+1) E|X_1|).

    Exact inputs are compared as squares: p_n^2 <= c1^2 q and q <= 16 c1^2 c2^2 p_n^2,
    and the reports carry the squared sides.

    Returns:
        (lower report, upper report).
    """
    p, se_p, mc_p = _split("p_n", p_n)
    s, se_s, mc_s = _split("mean_abs_S", mean_abs_S)
    x = _positive("mean_abs_X", mean_abs_X)
    c = _positive("c2", c2)
    constants = {"c1": c1, "c2": c2}

    if mc_p or mc_s:
        scale = 1.0 / ((n + 1) * float(x))
        root = math.sqrt(float(s) * scale)
        # d sqrt(q) = dq / (2 sqrt(q))
        se_root = scale * se_s / (2.0 * root) if root > 0 else 0.0
        lower = root / (4.0 * c1 * float(c))
        upper = c1 * root
        p = float(p)
        return (
            _report(
                Inequality.TWO_SIDED_LOWER,
                n,
                lhs=lower,
                rhs=p,
                margin=p - lower,
                stderr=math.hypot(se_p, se_root / (4.0 * c1 * float(c))),
                simulated=True,
                constants=constants,
            ),
            _report(
                Inequality.TWO_SIDED_UPPER,
                n,
                lhs=p,
                rhs=upper,
                margin=upper - p,
                stderr=math.hypot(se_p, c1 * se_root),
                simulated=True,
                constants=constants,
            ),
        )

    q = s / ((n + 1) * x)
    c1_sq = _squared(c1)
    squared = {**constants, "squared": 1.0}
    lower_rhs = 16 * c1_sq * c * c * p * p
    upper_rhs = c1_sq * q
    return (
        _report(
            Inequality.TWO_SIDED_LOWER,
            n,
            lhs=q,
            rhs=lower_rhs,
            margin=lower_rhs - q,
            constants=squared,
        ),
        _report(
            Inequality.TWO_SIDED_UPPER,
            n,
            lhs=p * p,
            rhs=upper_rhs,
            margin=upper_rhs - p * p,
            constants=squared,
        ),
    )


def exact_report_table(n_max: int, params: Optional[DecayParams] = None) -> list[BoundReport]:
    """Every bound for Rademacher increments from exact tables, n = 0..n_max."""
    spec = rademacher()
    params = params or certified_params(spec)
    decay = check_decay(spec, params)
    table = order2_table(n_max)
    mixed = convolution_sequence(table, n_max, "mixed")
    strict = convolution_sequence(table, n_max, "strict")
    c1, c2 = c1_constant(True), c2_constant(params)
    mean_x = Fraction(1)

    reports: list[BoundReport] = []
    for n in range(n_max + 1):
        mean_s = mean_abs_Sn_rademacher(n + 1)
        reports.append(verify_upper_convolution(n, mixed[n], mean_s, mean_x, c1))
        reports.append(verify_lower_convolution(n, strict[n], mean_s, mean_x, c2, decay))
        reports.extend(verify_two_sided(n, table.strict[n], mean_s, mean_x, c1, c2))
    failed = sum(not r.holds for r in reports)
    logger.info(f"Exact bound table to n={n_max}: {len(reports)} rows, {failed} failed")
    return reports


def montecarlo_report_table(
    spec: DistributionSpec,
    ns: Sequence[int],
    paths: int,
    seed: int,
    workers: int = 1,
    params: Optional[DecayParams] = None,
) -> list[BoundReport]:
    """Bound rows from simulated order-2 tables.

    Lower-bound rows need a decay certificate; without one they are skipped.
    """
    symmetric = is_symmetric(spec)
    c1 = c1_constant(symmetric)
    mean_x = mean_abs(spec)
    try:
        params = params or certified_params(spec)
        decay: Optional[DecayReport] = check_decay(spec, params)
    except SpecError as e:
        logger.warning(f"No decay certificate for {format_spec(spec)}: {e}")
        decay = None
    if decay is not None and not decay.holds:
        logger.warning(
            f"{BOUND_NOT_CERTIFIED.format(spec=format_spec(spec))} "
            f"Max violation {decay.max_violation:.3e} at t={decay.worst_t:g}, "
            f"s={decay.worst_s:g}; lower-bound rows skipped."
        )
    certified = decay is not None and decay.holds
    c2 = c2_constant(params) if certified else math.nan

    reports: list[BoundReport] = []
    for n in ns:
        cfg = RunConfig(spec=spec, n=n, paths=paths, seed=seed, order=2, workers=workers)
        mean_s = estimate_mean_abs_S(cfg.with_(n=n + 1))
        p_n = estimate_persistence(cfg)
        reports.append(
            verify_upper_convolution(n, convolution_estimate(cfg, "mixed"), mean_s, mean_x, c1)
        )
        if certified:
            conv = convolution_estimate(cfg, "strict")
            reports.append(verify_lower_convolution(n, conv, mean_s, mean_x, c2, decay))
            reports.extend(verify_two_sided(n, p_n, mean_s, mean_x, c1, c2))
        else:
            reports.append(verify_two_sided(n, p_n, mean_s, mean_x, c1, 1.0)[1])
    return reports
