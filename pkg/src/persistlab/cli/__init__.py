"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 verification failure.
"""

import logging
import sys
from typing import Any, Optional

import click

from persistlab import __version__
from persistlab.cli.context import CliState
from persistlab.config import config as config_dict
from persistlab.config import get_config
from persistlab.models import ExitCode, PersistlabError
from persistlab.utils.budget import init_step_budget
from persistlab.utils.logging import log_error, setup_logging


class PersistlabGroup(click.Group):
    """Group whose main maps every outcome onto the exit code contract."""

    def main(self, *args: Any, standalone_mode: bool = True, **kwargs: Any) -> Any:
        try:
            result = super().main(*args, standalone_mode=False, **kwargs)
            code = int(result) if isinstance(result, int) else int(ExitCode.OK)
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            code = int(ExitCode.USAGE)
        except click.ClickException as e:
            e.show()
            code = int(ExitCode.USAGE)
        except (PersistlabError, ValueError) as e:
            log_error(e, level=logging.DEBUG, exc_info=True)
            click.echo(f"Error: {e}", err=True)
            code = int(ExitCode.USAGE)
        if standalone_mode:
            sys.exit(code)
        return code


@click.group(cls=PersistlabGroup)
@click.option(
    "--config",
    "config_name",
    type=click.Choice(sorted(config_dict)),
    default=None,
    help="Configuration name (PERSISTLAB_ENV).",
)
@click.option(
    "--step-budget",
    type=click.IntRange(min=1),
    default=None,
    help="Largest paths x steps product per estimate (PERSISTLAB_STEP_BUDGET).",
)
@click.option(
    "--out-dir", default=None, help="Directory for result files (PERSISTLAB_OUTPUT_DIR)."
)
@click.option("-v", "--verbose", is_flag=True, help="Log at DEBUG level.")
@click.version_option(__version__, prog_name="persistlab")
@click.pass_context
def cli(
    ctx: click.Context,
    config_name: Optional[str],
    step_budget: Optional[int],
    out_dir: Optional[str],
    verbose: bool,
) -> None:
    """Persistence probabilities of random walks and their iterated sums."""
    config_class = get_config(config_name)
    setup_logging(logging.DEBUG if verbose else config_class.LOG_LEVEL)
    init_step_budget(step_budget or config_class.STEP_BUDGET)
    ctx.obj = CliState(config_class=config_class, step_budget=step_budget, out_dir=out_dir)


def main(argv: Optional[list[str]] = None) -> int:
    """Console entry point."""
    return cli.main(args=argv, prog_name="persistlab", standalone_mode=False)


# Import commands to register them
from persistlab.cli import bounds, decay, exact, fit, ibm, mc, suite  # noqa: E402

cli.add_command(exact.exact)
cli.add_command(mc.mc)
cli.add_command(fit.fit)
cli.add_command(bounds.bounds)
cli.add_command(decay.decay)
cli.add_command(ibm.ibm)
cli.add_command(suite.suite)
