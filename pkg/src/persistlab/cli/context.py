"""State shared by the command group and its commands."""

from dataclasses import dataclass
from typing import Optional

import click

from persistlab.config import Config, RunSettings, SettingsService


@dataclass(frozen=True)
class CliState:
    config_class: type[Config]
    step_budget: Optional[int] = None
    out_dir: Optional[str] = None


def run_settings(
    ctx: click.Context, seed: Optional[int] = None, workers: Optional[int] = None
) -> RunSettings:
    """Resolve settings for one command: flags > environment > configuration defaults."""
    state = ctx.find_object(CliState)
    if state is None:
        state = CliState(config_class=Config)
    return SettingsService(
        seed=seed,
        workers=workers,
        step_budget=state.step_budget,
        output_dir=state.out_dir,
        config_class=state.config_class,
    ).get_run_settings()
