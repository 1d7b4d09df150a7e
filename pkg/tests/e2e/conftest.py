import os
from pathlib import Path

import pytest

from osc_rnnt import config as config_module
from osc_rnnt.logging.logger import LoggingConfig
from osc_rnnt.logging.transport import AsyncEventBus


@pytest.fixture(scope="function", autouse=True)
def cleanup_event_bus(monkeypatch):
    """Reset settings, the AsyncEventBus and logging config between tests"""
    monkeypatch.setattr(config_module, "_settings", None)
    yield
    AsyncEventBus.reset()
    LoggingConfig.reset()


@pytest.fixture(scope="session")
def project_root():
    """Return the project root directory as a Path object"""
    return Path(__file__).parent.parent.parent


@pytest.fixture
def test_dir_config(request):
    """
    Runs the test from its own directory and returns the osc-rnnt.config.yaml found there.
    """
    test_dir = os.path.dirname(request.module.__file__)
    original_cwd = os.getcwd()
    os.chdir(test_dir)
    yield Path(test_dir) / "osc-rnnt.config.yaml"
    os.chdir(original_cwd)
