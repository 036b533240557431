"""mc: Monte Carlo persistence and E|S_n| estimates."""

import os
from fractions import Fraction
from typing import Optional

import click

from persistlab.cli.context import run_settings
from persistlab.cli.decorators import n_list_option, run_command, simulation_options, spec_option
from persistlab.cli.responses import Console, output_path, write_records
from persistlab.distributions import DistTag, DistributionSpec, format_spec
from persistlab.exact import ORDER1_MAX_N, ORDER2_MAX_N, threshold_table
from persistlab.models import Estimate, Strictness
from persistlab.montecarlo import RunConfig, estimate_mean_abs_S, estimate_persistence
from persistlab.utils.records import write_csv


def _exact_reference(cfg: RunConfig) -> Optional[Fraction]:
    """Exact value for Rademacher at an integer level within the table range."""
    cap = ORDER1_MAX_N if cfg.order == 1 else ORDER2_MAX_N
    if cfg.spec.tag is not DistTag.RADEMACHER or cfg.y != int(cfg.y) or cfg.n > cap:
        return None
    table = threshold_table(cfg.order, cfg.n, int(cfg.y))
    return table.p(cfg.n) if cfg.strictness is Strictness.STRICT else table.p_bar(cfg.n)


@click.command("mc")
@click.option("--dist", "spec", required=True, callback=spec_option, help="e.g. gaussian:1")
@click.option("--order", type=click.IntRange(1, 2), default=1, show_default=True)
@click.option("--n", "ns", required=True, callback=n_list_option, help="'64,256' or '64..8192'")
@simulation_options
@click.option("--y", type=click.FloatRange(min=0), default=0.0, show_default=True)
@click.option(
    "--strictness", type=click.Choice(["strict", "weak"]), default="strict", show_default=True
)
@click.option(
    "--quantity",
    type=click.Choice(["persistence", "mean-abs"]),
    default="persistence",
    show_default=True,
)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="JSON-lines file.")
@click.pass_context
@run_command("mc")
def mc(
    ctx: click.Context,
    spec: DistributionSpec,
    order: int,
    ns: list[int],
    paths: int,
    seed: Optional[int],
    workers: Optional[int],
    y: float,
    strictness: str,
    quantity: str,
    out: Optional[str],
) -> int:
    """Estimate p_n (or E|S_n|) for each n, one record per estimate."""
    settings = run_settings(ctx, seed=seed, workers=workers)
    name = format_spec(spec).replace(":", "-")
    out = out or output_path(settings.output_dir, f"mc_{quantity}_{name}_order{order}.jsonl")

    rows = []
    estimates: list[tuple[RunConfig, Estimate]] = []
    for n in ns:
        cfg = RunConfig(
            spec=spec,
            n=n,
            paths=paths,
            seed=settings.seed,
            order=order,
            strictness=Strictness(strictness),
            y=y,
            workers=settings.workers,
        )
        if quantity == "mean-abs":
            estimate = estimate_mean_abs_S(cfg)
            reference = None
        else:
            estimate = estimate_persistence(cfg)
            reference = _exact_reference(cfg)
        estimates.append((cfg, estimate))
        z = estimate.z_score(float(reference)) if reference is not None else None
        rows.append(
            (
                n,
                estimate.value,
                estimate.stderr,
                "" if reference is None else str(reference),
                "" if z is None else f"{z:+.2f}",
            )
        )

    for cfg, estimate in estimates:
        write_records(out, "mc", {**cfg.to_dict(), "quantity": quantity}, [estimate.to_dict()])
    write_csv(
        os.path.splitext(out)[0] + ".csv",
        ("n", "value", "stderr"),
        ((e.n, e.value, e.stderr) for _, e in estimates),
    )
    Console.table(("n", "estimate", "stderr", "exact", "z"), rows)
    Console.info(f"Wrote {out}")
    return 0
