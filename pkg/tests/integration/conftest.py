from pathlib import Path

import pytest
from typer.testing import CliRunner

from osc_rnnt import config as config_module
from osc_rnnt.cli.main import app
from osc_rnnt.logging.logger import LoggingConfig
from osc_rnnt.logging.transport import AsyncEventBus


@pytest.fixture(scope="function", autouse=True)
def cleanup_event_bus(monkeypatch):
    """Fresh settings, bus and logging config for every command invocation"""
    monkeypatch.setattr(config_module, "_settings", None)
    yield
    AsyncEventBus.reset()
    LoggingConfig.reset()


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def config_file(tmp_path) -> Path:
    path = tmp_path / "osc-rnnt.config.yaml"
    path.write_text(
        "workers: 2\n"
        "logger:\n  type: none\n  progress_display: false\n"
        "bench:\n  repeats: 1\n  warmup: false\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture
def invoke(runner, config_file):
    """Run `osc-rnnt <args>`; commands that read settings get the test config."""

    def run(*args: str, config: bool = True):
        argv = [str(a) for a in args]
        if config:
            argv += ["--config", str(config_file)]
        return runner.invoke(app, argv)

    return run


@pytest.fixture
def workspace(tmp_path, invoke):
    """A tiny model and four short utterances written by the generator commands."""
    model = tmp_path / "model.rntw"
    feats = tmp_path / "feats"
    result = invoke("gen-model", "--preset", "tiny", "--seed", "1", "--out", model, config=False)
    assert result.exit_code == 0, result.output
    result = invoke(
        "gen-features", "--out-dir", feats, "--dims", "4", "--count", "4",
        "--min-frames", "3", "--max-frames", "6", "--seed", "2", config=False,
    )
    assert result.exit_code == 0, result.output
    return tmp_path, model, feats
