"""Command decorators and shared options."""

import time
from functools import wraps
from typing import Callable

import click

from persistlab.distributions import DistributionSpec, parse_spec
from persistlab.models import ExitCode
from persistlab.utils.logging import clear_run_id, generate_run_id, log_run, set_run_id
from persistlab.utils.validation import parse_float_list, parse_n_list, validate_spec_text


def run_command(name: str):
    """Decorator that tags a command run with a run ID and logs its outcome.

    The wrapped command returns an exit code (None counts as success).

    Args:
        name: Command name used in the run log.

    Returns:
        Decorator function.
    """

    def decorator(f: Callable):
        @wraps(f)
        def decorated_function(*args, **kwargs):
            set_run_id(generate_run_id())
            started = time.perf_counter()
            status = int(ExitCode.USAGE)
            try:
                result = f(*args, **kwargs)
                status = int(result) if result is not None else int(ExitCode.OK)
                return status
            finally:
                log_run(name, status, (time.perf_counter() - started) * 1000)
                clear_run_id()

        return decorated_function

    return decorator


def spec_option(ctx: click.Context, param: click.Parameter, value: str) -> DistributionSpec:
    """Click callback turning a spec string into a DistributionSpec."""
    is_valid, message = validate_spec_text(value)
    if not is_valid:
        raise click.BadParameter(message)
    return parse_spec(value)


def n_list_option(ctx: click.Context, param: click.Parameter, value: str) -> list[int]:
    """Click callback for "64,256" or "64..8192"."""
    values, message = parse_n_list(value)
    if message:
        raise click.BadParameter(message)
    return values


def float_list_option(ctx: click.Context, param: click.Parameter, value: str) -> list[float]:
    values, message = parse_float_list(value)
    if message:
        raise click.BadParameter(message)
    return values


def simulation_options(f: Callable) -> Callable:
    """--paths, --seed and --workers; seed and workers fall back to the environment."""
    f = click.option(
        "--workers",
        type=click.IntRange(min=1),
        default=None,
        help="Worker threads (PERSISTLAB_WORKERS). Never changes results.",
    )(f)
    f = click.option(
        "--seed",
        type=click.IntRange(min=0, max=2**64 - 1),
        default=None,
        help="Root seed (PERSISTLAB_SEED).",
    )(f)
    f = click.option(
        "--paths", type=click.IntRange(min=1), default=100_000, show_default=True
    )(f)
    return f
