"""Tests for configuration and run settings."""

import logging

import pytest

from persistlab.config import Config, SettingsService, config, get_config
from persistlab.config.config import env_seed, env_workers


def test_config_names():
    assert set(config) == {"default", "development", "testing"}
    assert get_config("development").LOG_LEVEL == logging.DEBUG


def test_get_config_from_environment(monkeypatch):
    monkeypatch.setenv("PERSISTLAB_ENV", "testing")
    assert get_config() is config["testing"]


def test_unknown_config_name():
    with pytest.raises(ValueError):
        get_config("production")


def test_block_layout_is_fixed():
    """Block size and step chunk are part of the stream layout."""
    assert Config.BLOCK_PATHS == 4096
    assert Config.STEP_CHUNK == 256
    assert Config.MC_ALLOWANCE_SE == 4.0


def test_env_seed_and_workers(monkeypatch):
    monkeypatch.delenv("PERSISTLAB_SEED", raising=False)
    monkeypatch.delenv("PERSISTLAB_WORKERS", raising=False)
    assert env_seed() is None and env_workers() is None
    monkeypatch.setenv("PERSISTLAB_SEED", "0x10")
    monkeypatch.setenv("PERSISTLAB_WORKERS", "3")
    assert env_seed() == 16
    assert env_workers() == 3


@pytest.mark.parametrize(
    "name,value", [("PERSISTLAB_SEED", "-1"), ("PERSISTLAB_SEED", "x"), ("PERSISTLAB_WORKERS", "0")]
)
def test_env_values_are_validated(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ValueError):
        env_seed() if name == "PERSISTLAB_SEED" else env_workers()


def test_settings_precedence(monkeypatch):
    """Flags beat the environment, which beats configuration defaults."""
    monkeypatch.setenv("PERSISTLAB_SEED", "99")
    monkeypatch.delenv("PERSISTLAB_WORKERS", raising=False)
    testing = get_config("testing")

    settings = SettingsService(config_class=testing).get_run_settings()
    assert settings.seed == 99
    assert settings.workers == testing.WORKERS
    assert settings.step_budget == testing.STEP_BUDGET

    settings = SettingsService(seed=7, workers=2, output_dir="out", config_class=testing)
    resolved = settings.get_run_settings()
    assert (resolved.seed, resolved.workers, resolved.output_dir) == (7, 2, "out")


def test_seed_defaults_to_config(monkeypatch):
    monkeypatch.delenv("PERSISTLAB_SEED", raising=False)
    testing = get_config("testing")
    assert SettingsService(config_class=testing).get_run_settings().seed == testing.SEED
