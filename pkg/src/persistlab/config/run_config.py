"""Run settings resolution."""

from dataclasses import dataclass
from typing import Optional

from persistlab.config.config import Config, env_seed, env_workers, get_config


@dataclass(frozen=True)
class RunSettings:
    """Resolved settings shared by every command of one run."""

    seed: int
    workers: int
    step_budget: int
    output_dir: str


class SettingsService:
    """Resolve run settings with precedence flags > environment > defaults."""

    def __init__(
        self,
        seed: Optional[int] = None,
        workers: Optional[int] = None,
        step_budget: Optional[int] = None,
        output_dir: Optional[str] = None,
        config_class: Optional[type[Config]] = None,
    ):
        """Initialize settings service.

        Args:
            seed: Root seed given on the command line.
            workers: Worker count given on the command line.
            step_budget: Step budget given on the command line.
            output_dir: Output directory given on the command line.
            config_class: Configuration supplying the built-in defaults.
        """
        self.seed = seed
        self.workers = workers
        self.step_budget = step_budget
        self.output_dir = output_dir
        self.config_class = config_class or get_config()

    def get_run_settings(self) -> RunSettings:
        """Get run settings with environment values and defaults applied.

        Returns:
            RunSettings object.
        """
        defaults = self.config_class
        seed = self.seed if self.seed is not None else env_seed()
        workers = self.workers if self.workers is not None else env_workers()
        return RunSettings(
            seed=seed if seed is not None else defaults.SEED,
            workers=workers if workers is not None else defaults.WORKERS,
            step_budget=self.step_budget or defaults.STEP_BUDGET,
            output_dir=self.output_dir or defaults.OUTPUT_DIR,
        )
