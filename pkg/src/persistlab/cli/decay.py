"""decay: check the lower-tail decay assumption on a grid."""

from typing import Optional

import click

from persistlab.bounds import c2_constant
from persistlab.cli.bounds import decay_param_options, decay_params
from persistlab.cli.context import run_settings
from persistlab.cli.decorators import run_command, spec_option
from persistlab.cli.responses import Console, output_path, verification_failed, write_records
from persistlab.constants.messages import CLI_DECAY_FAILED
from persistlab.distributions import (
    DistributionSpec,
    certified_params,
    check_decay,
    default_grid,
    format_spec,
)


@click.command("decay")
@click.option("--dist", "spec", required=True, callback=spec_option)
@decay_param_options
@click.option("--points", type=click.IntRange(min=2), default=200, show_default=True)
@click.pass_context
@run_command("decay")
def decay(
    ctx: click.Context,
    spec: DistributionSpec,
    K: Optional[float],
    L: Optional[float],
    theta: Optional[float],
    r: Optional[float],
    points: int,
) -> int:
    """Largest violation of P(-X>t+s) <= K P(-X>t) P(-X>s) + L P(-X>r)^(theta (t+s)).

    Without --K/--L/--theta/--r the built-in certified parameters are used.
    """
    settings = run_settings(ctx)
    params = decay_params(spec, K, L, theta, r) or certified_params(spec)
    report = check_decay(spec, params, default_grid(points))

    Console.table(
        ("K", "L", "theta", "r", "alpha", "c2", "max violation"),
        [
            (
                params.K,
                params.L,
                params.theta,
                params.r,
                params.alpha,
                c2_constant(params),
                report.max_violation,
            )
        ],
    )
    name = format_spec(spec).replace(":", "-")
    write_records(
        output_path(settings.output_dir, f"decay_{name}.jsonl"),
        "decay",
        {"spec": format_spec(spec), "points": points},
        [report.to_dict()],
    )
    if not report.holds:
        return verification_failed(
            CLI_DECAY_FAILED.format(
                spec=report.spec,
                violation=report.max_violation,
                t=report.worst_t,
                s=report.worst_s,
            )
        )
    Console.success(f"No violation on the {report.grid} grid")
    return 0
