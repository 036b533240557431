"""fit: persistence exponent from recorded estimates."""

from typing import Optional

import click

from persistlab.cli.decorators import run_command
from persistlab.cli.responses import Console, verification_failed, write_records
from persistlab.constants.messages import CLI_FIT_OUTSIDE, CLI_INPUT_EMPTY
from persistlab.models import Estimate
from persistlab.montecarlo import MIN_FIT_EVENTS, fit_exponent
from persistlab.utils.records import read_records


def load_estimates(path: str) -> list[Estimate]:
    """Persistence estimates recorded by ``mc``, in file order."""
    estimates = []
    for record in read_records(path):
        if record.command != "mc" or record.config.get("quantity", "persistence") != "persistence":
            continue
        estimates.append(Estimate.from_dict(record.payload))
    return estimates


@click.command("fit")
@click.option(
    "--input", "input_path", type=click.Path(exists=True, dir_okay=False), required=True
)
@click.option("--min-events", type=click.FloatRange(min=0), default=MIN_FIT_EVENTS)
@click.option("--expect", type=float, default=None, help="Expected exponent.")
@click.option("--tolerance", type=click.FloatRange(min=0), default=0.05, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="JSON-lines file.")
@run_command("fit")
def fit(
    input_path: str,
    min_events: float,
    expect: Optional[float],
    tolerance: float,
    out: Optional[str],
) -> int:
    """Fit p_n ~ C n^-gamma by weighted least squares on the log-log scale."""
    estimates = load_estimates(input_path)
    if not estimates:
        raise click.BadParameter(CLI_INPUT_EMPTY.format(path=input_path), param_hint="--input")
    result = fit_exponent(estimates, min_events=min_events)

    Console.table(("n", "estimate", "stderr"), ((e.n, e.value, e.stderr) for e in estimates))
    Console.info(f"gamma = {result.gamma:.4f} +/- {result.stderr:.4f} ({result.points} points)")
    if out:
        config = {"input": input_path, "min_events": min_events}
        write_records(out, "fit", config, [result.to_dict()])

    if expect is not None:
        if abs(result.gamma - expect) > tolerance:
            return verification_failed(
                CLI_FIT_OUTSIDE.format(gamma=result.gamma, expect=expect, tolerance=tolerance)
            )
        Console.success(f"gamma within {tolerance} of {expect}")
    return 0
