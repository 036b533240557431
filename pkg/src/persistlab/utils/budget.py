"""Up-front guard on simulation size."""

import logging
from typing import Optional

import psutil

from persistlab.constants.messages import BUDGET_EXCEEDED, BUDGET_MEMORY, BUDGET_NOT_INITIALIZED
from persistlab.models import BudgetError

logger = logging.getLogger(__name__)

# float64 arrays alive per block: increments, partial sums, iterated sums
BLOCK_ARRAYS = 3


class StepBudget:
    """Reject simulations larger than a configured number of path-steps.

    Args:
        max_steps: Largest accepted paths x steps product.
        check_memory: Also require the per-block working set to fit in available RAM.

    Example:
        >>> budget = StepBudget(max_steps=10**9)
        >>> budget.check(paths=10**5, steps=8192)
    """

    def __init__(self, max_steps: int, check_memory: bool = True) -> None:
        self.max_steps = int(max_steps)
        self.check_memory = check_memory

    def check(
        self,
        paths: int,
        steps: int,
        block_paths: int = 4096,
        step_chunk: int = 256,
        workers: int = 1,
    ) -> None:
        """Raise BudgetError when the request is too large.

        Args:
            paths: Number of simulated paths.
            steps: Steps per path.
            block_paths: Paths per block.
            step_chunk: Steps drawn per vectorised chunk.
            workers: Concurrent blocks in flight.
        """
        total = int(paths) * max(int(steps), 1)
        if total > self.max_steps:
            raise BudgetError(BUDGET_EXCEEDED.format(steps=total, budget=self.max_steps))

        if self.check_memory:
            need = BLOCK_ARRAYS * 8 * min(paths, block_paths) * min(max(steps, 1), step_chunk)
            need *= max(workers, 1)
            available = psutil.virtual_memory().available
            if need > available:
                raise BudgetError(
                    BUDGET_MEMORY.format(
                        need_mb=need / (1024 * 1024), available_mb=available / (1024 * 1024)
                    )
                )


# Global budget instance for application-wide use
_step_budget: Optional[StepBudget] = None


def init_step_budget(max_steps: int, check_memory: bool = True) -> StepBudget:
    """Initialize the global step budget.

    Args:
        max_steps: Largest accepted paths x steps product.
        check_memory: Also check available memory.

    Returns:
        The initialized StepBudget instance.
    """
    global _step_budget
    _step_budget = StepBudget(max_steps=max_steps, check_memory=check_memory)
    logger.info("Step budget initialized: %d path-steps", max_steps)
    return _step_budget


def get_step_budget() -> StepBudget:
    """Get the global step budget.

    Raises:
        RuntimeError: If the budget has not been initialized.
    """
    if _step_budget is None:
        raise RuntimeError(BUDGET_NOT_INITIALIZED)
    return _step_budget


def current_step_budget() -> StepBudget:
    """Global budget if initialized, else one built from the active configuration."""
    if _step_budget is not None:
        return _step_budget
    from persistlab.config import get_config

    return StepBudget(max_steps=get_config().STEP_BUDGET)
