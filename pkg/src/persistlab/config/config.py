"""Configuration classes.

Environment Variables:
    Optional (with defaults):
        PERSISTLAB_SEED - Root seed for Monte Carlo streams (64-bit unsigned)
        PERSISTLAB_WORKERS - Number of simulation worker threads
        PERSISTLAB_STEP_BUDGET - Maximum paths x steps accepted by one call
        PERSISTLAB_LOG_LEVEL - Logging level name (DEBUG, INFO, ...)
        PERSISTLAB_OUTPUT_DIR - Directory for result files
        PERSISTLAB_ENV - Configuration name (default, development, testing)
"""

import logging
import os
from typing import Optional

from dotenv import load_dotenv

from persistlab.constants.messages import CLI_CONFIG_NAME

load_dotenv()

DEFAULT_SEED = 20100301
DEFAULT_STEP_BUDGET = 2**34
SEED_MASK = 2**64 - 1


def _env_int(name: str, default: int) -> int:
    """Read an integer environment variable.

    Raises:
        ValueError: If the variable is set but not an integer.
    """
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw, 0)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got '{raw}'.") from None


def env_seed() -> Optional[int]:
    """Root seed from PERSISTLAB_SEED, or None when unset."""
    if os.getenv("PERSISTLAB_SEED") in (None, ""):
        return None
    seed = _env_int("PERSISTLAB_SEED", DEFAULT_SEED)
    if not 0 <= seed <= SEED_MASK:
        raise ValueError(f"PERSISTLAB_SEED must fit in 64 unsigned bits, got {seed}.")
    return seed


def env_workers() -> Optional[int]:
    """Worker count from PERSISTLAB_WORKERS, or None when unset."""
    if os.getenv("PERSISTLAB_WORKERS") in (None, ""):
        return None
    workers = _env_int("PERSISTLAB_WORKERS", 1)
    if workers < 1:
        raise ValueError(f"PERSISTLAB_WORKERS must be at least 1, got {workers}.")
    return workers


class Config:
    """Base configuration."""

    SEED = DEFAULT_SEED
    WORKERS = 1

    # Paths x steps for a single estimate; 2**14 steps x 10**5 paths fits comfortably
    STEP_BUDGET = _env_int("PERSISTLAB_STEP_BUDGET", DEFAULT_STEP_BUDGET)

    # Paths per random-stream block; fixed so results never depend on worker count
    BLOCK_PATHS = 4096
    STEP_CHUNK = 256

    # Statistical allowance, in propagated standard errors
    MC_ALLOWANCE_SE = 4.0

    LOG_LEVEL = getattr(logging, os.getenv("PERSISTLAB_LOG_LEVEL", "INFO").upper(), logging.INFO)
    OUTPUT_DIR = os.getenv("PERSISTLAB_OUTPUT_DIR", "results")


class DevelopmentConfig(Config):
    """Development configuration."""

    LOG_LEVEL = logging.DEBUG


class TestingConfig(Config):
    """Testing configuration."""

    TESTING = True
    SEED = 12345
    STEP_BUDGET = 2**30
    LOG_LEVEL = logging.WARNING


config = {
    "development": DevelopmentConfig,
    "testing": TestingConfig,
    "default": Config,
}


def get_config(name: Optional[str] = None) -> type[Config]:
    """Look up a configuration class by name (PERSISTLAB_ENV when omitted)."""
    name = name or os.getenv("PERSISTLAB_ENV", "default")
    if name not in config:
        raise ValueError(CLI_CONFIG_NAME.format(name=name))
    return config[name]
