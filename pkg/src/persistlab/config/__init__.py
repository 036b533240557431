"""Configuration module for persistlab."""

from persistlab.config.config import Config, config, get_config
from persistlab.config.run_config import RunSettings, SettingsService

__all__ = ["Config", "config", "get_config", "RunSettings", "SettingsService"]
