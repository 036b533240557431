"""suite: the acceptance battery with a health-report style summary."""

import json
import logging
import os
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Optional

import click

from persistlab import __version__
from persistlab.bounds import exact_report_table, montecarlo_report_table
from persistlab.cli.context import run_settings
from persistlab.cli.decorators import run_command
from persistlab.cli.responses import Console, output_path, verification_failed, write_records
from persistlab.distributions import (
    format_spec,
    gaussian,
    laplace,
    rademacher,
    shifted_pareto,
    stable_exponent,
)
from persistlab.exact import (
    brute_force,
    double_factorial,
    genfunc_residual,
    order1_table,
    sandwich_violations,
    sparre_residual,
    table_for_order,
)
from persistlab.gaussian import (
    ibm_scaling,
    mckean_constant,
    mckean_constant_reflection,
    slepian_check,
)
from persistlab.models import CheckResult, Inequality, PersistlabError, Strictness
from persistlab.montecarlo import (
    RunConfig,
    estimate_persistence,
    fit_exponent,
    moment_identity,
    path_corpus_check,
)

logger = logging.getLogger(__name__)

CheckOutcome = tuple[bool, str]


@dataclass(frozen=True)
class SuiteScale:
    """Sizes for one run of the battery."""

    name: str
    exact_n: int
    oracle_n: int
    density_paths: int
    lower_ns: tuple[int, ...]
    lower_paths: int
    moment_paths: int
    slepian_k: int
    determinism_paths: int
    determinism_workers: tuple[int, ...]
    exponents: bool
    exponent_paths: int = 100_000
    ibm_paths: int = 100_000


SCALES = {
    "quick": SuiteScale(
        name="quick",
        exact_n=64,
        oracle_n=12,
        density_paths=100_000,
        lower_ns=(4, 8, 16),
        lower_paths=100_000,
        moment_paths=20_000,
        slepian_k=128,
        determinism_paths=20_000,
        determinism_workers=(1, 4),
        exponents=False,
    ),
    "full": SuiteScale(
        name="full",
        exact_n=64,
        oracle_n=16,
        density_paths=1_000_000,
        lower_ns=(4, 8, 16, 32, 64, 128),
        lower_paths=1_000_000,
        moment_paths=100_000,
        slepian_k=512,
        determinism_paths=100_000,
        determinism_workers=(1, 4, 8),
        exponents=True,
    ),
}


def _specs():
    return {
        "rademacher": rademacher(),
        "gaussian": gaussian(1.0),
        "laplace": laplace(1.0),
        "pareto": shifted_pareto(1.5),
    }


def check_convolution_identity(scale: SuiteScale, seed: int, workers: int) -> CheckOutcome:
    table = order1_table(scale.exact_n)
    bad = [n for n in range(scale.exact_n + 1) if sparre_residual(table, n) != 0]
    if bad:
        return False, f"Nonzero residual at n={bad[0]}"
    return True, f"Residual 0 for n <= {scale.exact_n}"


def check_sandwich(scale: SuiteScale, seed: int, workers: int) -> CheckOutcome:
    table = order1_table(scale.exact_n)
    violations = sandwich_violations(table)
    residual = genfunc_residual(table, scale.exact_n)
    if violations or residual != 0:
        return False, f"Sandwich violations {violations}, generating-function residual {residual}"
    return True, f"Sandwich and generating function exact for n <= {scale.exact_n}"


def check_oracle(scale: SuiteScale, seed: int, workers: int) -> CheckOutcome:
    for order in (1, 2):
        table = table_for_order(order, scale.oracle_n)
        for n in range(scale.oracle_n + 1):
            if table.p(n) != brute_force(order, Strictness.STRICT, n):
                return False, f"Order {order} strict table differs at n={n}"
            if table.p_bar(n) != brute_force(order, Strictness.WEAK, n):
                return False, f"Order {order} weak table differs at n={n}"
    return True, f"Tables match enumeration for n <= {scale.oracle_n}"


def check_double_factorial(scale: SuiteScale, seed: int, workers: int) -> CheckOutcome:
    worst = 0.0
    for n in (4, 16, 64):
        cfg = RunConfig(
            spec=gaussian(1.0), n=n, paths=scale.density_paths, seed=seed, workers=workers
        )
        z = estimate_persistence(cfg).z_score(float(double_factorial(n)))
        worst = max(worst, abs(z))
    return worst <= 3.0, f"Largest |z| = {worst:.2f} (allowed 3)"


def check_exponents(scale: SuiteScale, seed: int, workers: int) -> CheckOutcome:
    ns = (64, 256, 1024, 4096, 8192)
    pareto = stable_exponent(1.5)
    targets = {
        "gaussian": (gaussian(1.0), 0.20, 0.30),
        "pareto": (shifted_pareto(1.5), pareto - 0.05, pareto + 0.05),
    }
    messages, passed = [], True
    for name, (spec, lo, hi) in targets.items():
        base = RunConfig(
            spec=spec, n=ns[0], paths=scale.exponent_paths, seed=seed, order=2, workers=workers
        )
        gamma = fit_exponent([estimate_persistence(base.with_(n=n)) for n in ns]).gamma
        passed = passed and lo <= gamma <= hi
        messages.append(f"{name} gamma={gamma:.3f} in [{lo:.3f}, {hi:.3f}]")
    return passed, "; ".join(messages)


def check_upper_bounds(scale: SuiteScale, seed: int, workers: int) -> CheckOutcome:
    wanted = (Inequality.UPPER_CONVOLUTION, Inequality.TWO_SIDED_UPPER)
    rows = [r for r in exact_report_table(scale.exact_n) if r.inequality in wanted]
    failed = [r for r in rows if not r.holds]
    if failed:
        return False, f"{failed[0].inequality.value} fails at n={failed[0].n}"
    return True, f"{len(rows)} exact rows hold for n <= {scale.exact_n}"


def check_lower_convolution(scale: SuiteScale, seed: int, workers: int) -> CheckOutcome:
    reports = montecarlo_report_table(
        laplace(1.0), scale.lower_ns, scale.lower_paths, seed, workers
    )
    rows = [r for r in reports if r.inequality is Inequality.LOWER_CONVOLUTION]
    failed = [r for r in rows if not r.holds]
    if failed:
        return False, f"Lower convolution bound fails at n={failed[0].n}"
    return True, f"Holds within the allowance for n in {list(scale.lower_ns)}"


def check_corpus(scale: SuiteScale, seed: int, workers: int) -> CheckOutcome:
    failed = []
    for spec in _specs().values():
        report = path_corpus_check(spec, paths=100, seed=seed, t_per_path=100)
        if not report.passed:
            failed.append(format_spec(spec))
    if failed:
        return False, f"Pathwise checks fail for {', '.join(failed)}"
    return True, "No mismatches over 10^4 (path, t) pairs per law"


def check_moment_identity(scale: SuiteScale, seed: int, workers: int) -> CheckOutcome:
    failed = []
    for name, spec in _specs().items():
        for n in (8, 32):
            row = moment_identity(spec, n, scale.moment_paths, seed, workers)
            if not row.holds:
                failed.append(f"{name} n={n}")
    if failed:
        return False, f"Range identity off for {', '.join(failed)}"
    return True, "E[A_n - B_n] = 2 E[max S_k] within the allowance"


def check_covariance(scale: SuiteScale, seed: int, workers: int) -> CheckOutcome:
    report = slepian_check(scale.slepian_k)
    return report.passed, f"{report.pairs} pairs checked up to k={scale.slepian_k}"


def check_mckean(scale: SuiteScale, seed: int, workers: int) -> CheckOutcome:
    value, other = mckean_constant(), mckean_constant_reflection()
    return abs(value - other) <= 1e-10, f"{value:.12f} (reflection {other:.12f})"


def check_ibm_scaling(scale: SuiteScale, seed: int, workers: int) -> CheckOutcome:
    _, fit = ibm_scaling((16.0, 64.0, 256.0, 1024.0), 0.01, scale.ibm_paths, seed, workers)
    slope = -fit.gamma
    return abs(slope + 0.25) <= 0.05, f"slope {slope:.3f} (expected -0.25 +/- 0.05)"


def check_determinism(scale: SuiteScale, seed: int, workers: int) -> CheckOutcome:
    payloads = set()
    for count in scale.determinism_workers:
        cfg = RunConfig(
            spec=gaussian(1.0),
            n=64,
            paths=scale.determinism_paths,
            seed=seed,
            order=2,
            workers=count,
        )
        payloads.add(json.dumps(estimate_persistence(cfg).to_dict(), sort_keys=True))
    workers_text = ", ".join(map(str, scale.determinism_workers))
    return len(payloads) == 1, f"{len(payloads)} distinct payload(s) over workers {workers_text}"


CHECKS: tuple[tuple[str, Callable[[SuiteScale, int, int], CheckOutcome], bool], ...] = (
    ("convolution-identity", check_convolution_identity, False),
    ("double-factorial-sandwich", check_sandwich, False),
    ("enumeration-oracle", check_oracle, False),
    ("density-double-factorial", check_double_factorial, False),
    ("persistence-exponents", check_exponents, True),
    ("upper-bounds-exact", check_upper_bounds, False),
    ("lower-convolution-mc", check_lower_convolution, False),
    ("interval-partition", check_corpus, False),
    ("range-identity", check_moment_identity, False),
    ("covariance-comparison", check_covariance, False),
    ("mckean-constant", check_mckean, False),
    ("ibm-scaling", check_ibm_scaling, True),
    ("determinism", check_determinism, False),
)


def run_check(
    name: str, check: Callable[[SuiteScale, int, int], CheckOutcome], *args
) -> CheckResult:
    """Run one check; an exception marks it failed with the error as message."""
    started = time.perf_counter()
    try:
        passed, message = check(*args)
    except (PersistlabError, ValueError) as e:
        logger.warning(f"Check {name} raised {type(e).__name__}: {e}")
        passed, message = False, str(e)
    return CheckResult(
        name=name,
        passed=bool(passed),
        message=message,
        seconds=round(time.perf_counter() - started, 3),
    )


def run_suite(
    scale: SuiteScale, seed: int, workers: int, only: Optional[set[str]] = None
) -> list[CheckResult]:
    results = []
    for name, check, heavy in CHECKS:
        if (heavy and not scale.exponents) or (only and name not in only):
            continue
        logger.info(f"Running {name}")
        results.append(run_check(name, check, scale, seed, workers))
    return results


def summary(scale: SuiteScale, results: list[CheckResult]) -> dict:
    all_passed = all(r.passed for r in results)
    return {
        "status": "passed" if all_passed else "failed",
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "version": f"persistlab-{__version__}",
        "scale": scale.name,
        "checks": {r.name: r.to_dict() for r in results},
    }


@click.command("suite")
@click.option("--scale", type=click.Choice(sorted(SCALES)), default="quick", show_default=True)
@click.option("--only", multiple=True, type=click.Choice([c[0] for c in CHECKS]))
@click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), default=None)
@click.option("--workers", type=click.IntRange(min=1), default=None)
@click.pass_context
@run_command("suite")
def suite(
    ctx: click.Context,
    scale: str,
    only: tuple[str, ...],
    seed: Optional[int],
    workers: Optional[int],
) -> int:
    """Run the acceptance checks and write a summary."""
    settings = run_settings(ctx, seed=seed, workers=workers)
    chosen = SCALES[scale]
    results = run_suite(chosen, settings.seed, settings.workers, set(only) or None)
    report = summary(chosen, results)

    os.makedirs(settings.output_dir, exist_ok=True)
    path = output_path(settings.output_dir, f"suite_{chosen.name}.json")
    with open(path, "w", encoding="utf-8") as stream:
        json.dump(report, stream, indent=2, sort_keys=True)
        stream.write("\n")
    config = {"scale": chosen.name, "seed": settings.seed, "workers": settings.workers}
    write_records(output_path(settings.output_dir, "suite.jsonl"), "suite", config, [report])

    Console.table(
        ("check", "status", "seconds", "message"),
        ((r.name, r.passed, r.seconds, r.message) for r in results),
    )
    if report["status"] != "passed":
        failed = ", ".join(r.name for r in results if not r.passed)
        return verification_failed(f"Failed checks: {failed}")
    Console.success(f"All {len(results)} checks passed")
    return 0
