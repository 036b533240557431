"""Standardized logging utilities."""

import logging
import uuid
from typing import Any, Optional

# Run ID context variable
_run_id_context: Optional[str] = None

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - [%(run_id)s] %(message)s"


def get_run_id() -> str:
    """Get current run ID or return N/A if not set."""
    return _run_id_context or "N/A"


def set_run_id(run_id: str) -> None:
    """Set run ID for context."""
    global _run_id_context
    _run_id_context = run_id


def clear_run_id() -> None:
    """Clear run ID context (useful for test cleanup)."""
    global _run_id_context
    _run_id_context = None


def generate_run_id() -> str:
    """Generate a unique run ID."""
    return str(uuid.uuid4())[:8]


class RunIdFilter(logging.Filter):
    """Stamp every record with the current run ID."""

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_id = get_run_id()
        return True


def setup_logging(level: int = logging.INFO) -> None:
    """Configure package-wide logging.

    Calling it twice does not stack handlers.

    Args:
        level: Logging level for the persistlab logger.
    """
    logger = logging.getLogger("persistlab")
    logger.setLevel(level)
    if any(getattr(h, "_persistlab", False) for h in logger.handlers):
        return

    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler.addFilter(RunIdFilter())
    handler._persistlab = True  # type: ignore[attr-defined]
    logger.addHandler(handler)


def log_error(
    error: Exception,
    context: Optional[dict[str, Any]] = None,
    level: int = logging.ERROR,
    exc_info: bool = True,
) -> None:
    """Log an error with standardized format.

    Args:
        error: The exception to log.
        context: Optional context dictionary with additional details.
        level: Logging level (default: ERROR).
        exc_info: Include traceback (default: True).
    """
    logger = logging.getLogger("persistlab")
    suffix = f" {context}" if context else ""
    logger.log(
        level,
        f"Error: {type(error).__name__}: {error}{suffix}",
        extra={"run_id": get_run_id()},
        exc_info=exc_info,
    )


def log_run(command: str, status: int, duration_ms: float) -> None:
    """Log a finished command with standardized format.

    Args:
        command: Command name.
        status: Exit code of the command.
        duration_ms: Wall time in milliseconds.
    """
    logger = logging.getLogger("persistlab")
    extra = {"run_id": get_run_id(), "command": command, "duration_ms": round(duration_ms, 2)}
    if status != 0:
        logger.warning(f"Run failed: {command} -> {status} ({duration_ms:.0f} ms)", extra=extra)
    else:
        logger.info(f"Run: {command} -> {status} ({duration_ms:.0f} ms)", extra=extra)
