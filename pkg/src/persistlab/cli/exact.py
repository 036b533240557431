"""exact: rational persistence tables for Rademacher increments."""

import os

import click

from persistlab.cli.context import run_settings
from persistlab.cli.decorators import run_command
from persistlab.cli.responses import Console, output_path, verification_failed, write_records
from persistlab.constants.messages import (
    CLI_EXACT_RESIDUAL,
    CLI_LEVEL_COMPARISON_FAILED,
    CLI_SANDWICH_FAILED,
)
from persistlab.exact import (
    genfunc_residual,
    sandwich_violations,
    sparre_residual,
    table_for_order,
    threshold_comparison,
    threshold_table,
)


@click.command("exact")
@click.option("--order", type=click.IntRange(1, 2), default=1, show_default=True)
@click.option("--n", "n_max", type=click.IntRange(min=0), required=True, help="Largest n.")
@click.option("--y", type=click.IntRange(min=0), default=0, show_default=True, help="Level.")
@click.pass_context
@run_command("exact")
def exact(ctx: click.Context, order: int, n_max: int, y: int) -> int:
    """Build p_n and p̄_n exactly and check the order-1 identities."""
    settings = run_settings(ctx)
    table = threshold_table(order, n_max, y) if y else table_for_order(order, n_max)

    stem = f"exact_order{order}_n{n_max}" + (f"_y{y}" if y else "")
    os.makedirs(settings.output_dir, exist_ok=True)
    json_path = output_path(settings.output_dir, f"{stem}.json")
    with open(json_path, "w", encoding="utf-8") as stream:
        stream.write(table.to_json() + "\n")
    table.to_csv(output_path(settings.output_dir, f"{stem}.csv"))
    write_records(
        output_path(settings.output_dir, "exact.jsonl"),
        "exact",
        {"order": order, "n_max": n_max, "y": y},
        [table.to_dict()],
    )

    rows = []
    for n in range(n_max + 1):
        p, p_bar = table.strict[n], table.weak[n]
        rows.append((n, str(p), str(p_bar), float(p), float(p_bar)))
    Console.table(("n", "p_n", "p̄_n", "p_n (float)", "p̄_n (float)"), rows)
    Console.info(f"Wrote {json_path}")
    if y:
        comparison = threshold_comparison(order, n_max, y, y + 1)
        if not comparison.holds:
            return verification_failed(
                CLI_LEVEL_COMPARISON_FAILED.format(y=y, ns=list(comparison.chain_violations))
            )
        Console.success(
            f"p_n(0) <= p̄_n(0) <= p_n({y}) <= p̄_n({y}) and "
            f"p_n(0) >= {comparison.factor} p̄_n({y}) for n <= {n_max}"
        )
        return 0
    if order != 1:
        return 0

    for n in range(n_max + 1):
        residual = sparre_residual(table, n)
        if residual != 0:
            return verification_failed(CLI_EXACT_RESIDUAL.format(n=n, value=residual))
    gen = genfunc_residual(table, n_max)
    if gen != 0:
        return verification_failed(CLI_EXACT_RESIDUAL.format(n=n_max, value=gen))
    Console.success(f"Convolution identity residuals are 0 for n <= {n_max}")

    violations = sandwich_violations(table)
    if violations:
        return verification_failed(CLI_SANDWICH_FAILED.format(ns=violations))
    Console.success(f"p_n <= (2n-1)!!/(2n)!! <= p̄_n for n <= {n_max}")
    return 0
