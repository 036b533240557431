"""bounds: convolution and two-sided persistence bounds."""

from typing import Optional

import click

from persistlab.bounds import exact_report_table, montecarlo_report_table
from persistlab.cli.context import run_settings
from persistlab.cli.decorators import n_list_option, run_command, simulation_options, spec_option
from persistlab.cli.responses import (
    first_failure,
    output_path,
    render_bound_reports,
    verification_failed,
    write_bound_csv,
    write_records,
)
from persistlab.constants.messages import (
    CLI_BOUND_FAILED,
    CLI_DECAY_PARAMS,
    CLI_EXACT_NEEDS_RADEMACHER,
)
from persistlab.distributions import DecayParams, DistTag, DistributionSpec, format_spec


def decay_params(
    spec: DistributionSpec,
    K: Optional[float],
    L: Optional[float],
    theta: Optional[float],
    r: Optional[float],
) -> Optional[DecayParams]:
    """DecayParams from the four options, or None when none are given."""
    given = [v is not None for v in (K, L, theta, r)]
    if not any(given):
        return None
    if not all(given):
        raise click.UsageError(CLI_DECAY_PARAMS)
    return DecayParams.for_spec(spec, K=K, L=L, theta=theta, r=r)


def decay_param_options(f):
    """--K, --L, --theta and --r."""
    for name in ("--r", "--theta", "--L", "--K"):
        f = click.option(name, name.lstrip("-"), type=float, default=None)(f)
    return f


@click.command("bounds")
@click.option("--dist", "spec", required=True, callback=spec_option)
@click.option("--n", "ns", required=True, callback=n_list_option, help="'64' or '4..128'")
@click.option("--exact", "use_exact", is_flag=True, help="Exact Rademacher tables to max n.")
@simulation_options
@decay_param_options
@click.pass_context
@run_command("bounds")
def bounds(
    ctx: click.Context,
    spec: DistributionSpec,
    ns: list[int],
    use_exact: bool,
    paths: int,
    seed: Optional[int],
    workers: Optional[int],
    K: Optional[float],
    L: Optional[float],
    theta: Optional[float],
    r: Optional[float],
) -> int:
    """Check the bounds on exact tables (--exact) or on Monte Carlo estimates."""
    settings = run_settings(ctx, seed=seed, workers=workers)
    params = decay_params(spec, K, L, theta, r)
    if use_exact:
        if spec.tag is not DistTag.RADEMACHER:
            raise click.BadParameter(
                CLI_EXACT_NEEDS_RADEMACHER.format(spec=format_spec(spec)), param_hint="--dist"
            )
        reports = exact_report_table(max(ns), params)
        config = {"spec": format_spec(spec), "n_max": max(ns), "source": "exact"}
    else:
        reports = montecarlo_report_table(
            spec, ns, paths, settings.seed, settings.workers, params
        )
        config = {
            "spec": format_spec(spec),
            "ns": ns,
            "paths": paths,
            "seed": settings.seed,
            "workers": settings.workers,
            "source": "montecarlo",
        }
    if params is not None:
        config["params"] = params.to_dict()

    name = format_spec(spec).replace(":", "-")
    stem = output_path(settings.output_dir, f"bounds_{name}_{config['source']}")
    write_records(f"{stem}.jsonl", "bounds", config, [r.to_dict() for r in reports])
    write_bound_csv(f"{stem}.csv", reports)
    render_bound_reports(reports)

    failed = first_failure(reports)
    if failed is not None:
        return verification_failed(
            CLI_BOUND_FAILED.format(
                inequality=failed.inequality.value,
                n=failed.n,
                lhs=float(failed.lhs),
                rhs=float(failed.rhs),
            )
        )
    return 0
