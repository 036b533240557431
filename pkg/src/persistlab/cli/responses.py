"""Console rendering and result-file helpers for the commands."""

import os
from typing import Any, Iterable, Optional, Sequence

import click

from persistlab import __version__
from persistlab.models import BoundReport, ExitCode, ResultRecord
from persistlab.utils.records import record_writer, write_csv


class Console:
    """Uniform console output for every command."""

    @staticmethod
    def table(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
        """Print a left-aligned text table.

        Args:
            header: Column titles.
            rows: Row values; floats use 6 significant digits.
        """
        text_rows = [[_cell(v) for v in row] for row in rows]
        widths = [len(h) for h in header]
        for row in text_rows:
            widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
        click.echo("  ".join(h.ljust(w) for h, w in zip(header, widths)))
        click.echo("  ".join("-" * w for w in widths))
        for row in text_rows:
            click.echo("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))

    @staticmethod
    def success(message: str) -> None:
        click.echo(click.style(message, fg="green"))

    @staticmethod
    def failure(message: str) -> None:
        click.echo(click.style(message, fg="red"), err=True)

    @staticmethod
    def info(message: str) -> None:
        click.echo(message)


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "pass" if value else "FAIL"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def verification_failed(message: str) -> int:
    """Report a failed check and return exit code 2."""
    Console.failure(message)
    return int(ExitCode.VERIFICATION_FAILED)


def output_path(out_dir: str, name: str) -> str:
    return os.path.join(out_dir, name)


def write_records(
    path: str, command: str, config: dict[str, Any], payloads: Iterable[dict[str, Any]]
) -> int:
    """Append one ResultRecord per payload to a JSON-lines file.

    Returns:
        Number of records written.
    """
    with record_writer(path) as out:
        for payload in payloads:
            out.write(
                ResultRecord(command=command, config=config, payload=payload, version=__version__)
            )
        return out.count


def render_bound_reports(reports: Sequence[BoundReport]) -> None:
    Console.table(
        ("inequality", "n", "lhs", "rhs", "margin", "source", "holds"),
        (
            (
                r.inequality.value,
                r.n,
                float(r.lhs),
                float(r.rhs),
                float(r.margin),
                r.source.value,
                r.holds,
            )
            for r in reports
        ),
    )


def write_bound_csv(path: str, reports: Sequence[BoundReport]) -> None:
    write_csv(
        path,
        ("inequality", "n", "lhs", "rhs", "margin", "allowance", "holds"),
        (
            (
                r.inequality.value,
                r.n,
                float(r.lhs),
                float(r.rhs),
                float(r.margin),
                r.allowance,
                int(r.holds),
            )
            for r in reports
        ),
    )


def first_failure(reports: Sequence[BoundReport]) -> Optional[BoundReport]:
    return next((r for r in reports if not r.holds), None)
