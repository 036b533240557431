"""Pytest configuration and fixtures."""

import pytest
from click.testing import CliRunner

from persistlab.cli import cli
from persistlab.config import get_config
from persistlab.utils.budget import init_step_budget
from persistlab.utils.logging import clear_run_id


@pytest.fixture
def config():
    """Testing configuration class."""
    return get_config("testing")


@pytest.fixture(autouse=True)
def step_budget(config):
    """Fresh global step budget for every test."""
    return init_step_budget(config.STEP_BUDGET, check_memory=False)


@pytest.fixture(autouse=True)
def cleanup_run_id():
    """Clean up run ID context after each test."""
    yield
    clear_run_id()


@pytest.fixture
def seed(config):
    """Fixed root seed."""
    return config.SEED


@pytest.fixture
def out_dir(tmp_path):
    """Result directory inside the test's temporary directory."""
    return str(tmp_path / "results")


@pytest.fixture
def runner():
    """A test runner for the Click commands."""
    return CliRunner()


@pytest.fixture
def invoke(runner, out_dir):
    """Run the CLI with the testing configuration and a temporary output directory."""

    def _invoke(*args):
        return runner.invoke(cli, ["--config", "testing", "--out-dir", out_dir, *args])

    return _invoke
