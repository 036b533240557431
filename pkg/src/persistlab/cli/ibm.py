"""ibm: persistence of integrated Brownian motion against the horizon."""

import os
from typing import Optional

import click

from persistlab.cli.context import run_settings
from persistlab.cli.decorators import float_list_option, run_command, simulation_options
from persistlab.cli.responses import Console, output_path, verification_failed, write_records
from persistlab.constants.messages import CLI_FIT_OUTSIDE, CLI_IBM_EXPECT_HORIZONS
from persistlab.gaussian import ibm_scaling, mckean_constant, simulate_ibm_persistence
from persistlab.utils.records import write_csv


@click.command("ibm")
@click.option(
    "--T", "T_values", default="16,64,256,1024", show_default=True, callback=float_list_option
)
@click.option("--dt", type=float, default=0.01, show_default=True)
@simulation_options
@click.option("--expect", type=float, default=None, help="Expected exponent of T.")
@click.option("--tolerance", type=click.FloatRange(min=0), default=0.05, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV file.")
@click.pass_context
@run_command("ibm")
def ibm(
    ctx: click.Context,
    T_values: list[float],
    dt: float,
    paths: int,
    seed: Optional[int],
    workers: Optional[int],
    expect: Optional[float],
    tolerance: float,
    out: Optional[str],
) -> int:
    """Estimate P(max of Y on the dt-grid of [0, T] <= 1) for each T.

    With three or more horizons the exponent of T is fitted as well; the expected
    value is 1/4, and --expect checks the fit against it.
    """
    if expect is not None and len(T_values) < 3:
        raise click.BadParameter(
            CLI_IBM_EXPECT_HORIZONS.format(count=len(T_values)), param_hint="--T"
        )
    settings = run_settings(ctx, seed=seed, workers=workers)
    if len(T_values) >= 3:
        rows, fit = ibm_scaling(T_values, dt, paths, settings.seed, settings.workers)
    else:
        rows = [
            (T, simulate_ibm_persistence(T, dt, paths, settings.seed, settings.workers))
            for T in T_values
        ]
        fit = None

    out = out or output_path(settings.output_dir, "ibm_scaling.csv")
    write_csv(out, ("T", "estimate", "stderr"), ((T, e.value, e.stderr) for T, e in rows))
    config = {"dt": dt, "paths": paths, "seed": settings.seed, "workers": settings.workers}
    write_records(
        os.path.splitext(out)[0] + ".jsonl",
        "ibm",
        config,
        [{"T": T, **e.to_dict()} for T, e in rows],
    )

    Console.table(("T", "estimate", "stderr"), ((T, e.value, e.stderr) for T, e in rows))
    if fit is not None:
        Console.info(f"slope = {-fit.gamma:.4f} +/- {fit.stderr:.4f} (expected -0.25)")
    Console.info(f"McKean constant = {mckean_constant():.12f}")
    if fit is not None and expect is not None:
        if abs(fit.gamma - expect) > tolerance:
            return verification_failed(
                CLI_FIT_OUTSIDE.format(gamma=fit.gamma, expect=expect, tolerance=tolerance)
            )
        Console.success(f"gamma within {tolerance} of {expect}")
    return 0
