"""Command to check osc-rnnt configuration."""

import platform
import sys
from importlib.metadata import version
from pathlib import Path
from typing import Optional

import numpy as np
import typer
import yaml
from pydantic import ValidationError
from rich.panel import Panel
from rich.table import Table

from osc_rnnt.config import CONFIG_FILENAMES, Settings
from osc_rnnt.console import console

app = typer.Typer(
    help="Check and diagnose osc-rnnt configuration",
    no_args_is_help=False,
)


def find_config_file(start_path: Path) -> Optional[Path]:
    """Find the configuration file in the given directory or its parents."""
    current = start_path
    while current != current.parent:
        for filename in CONFIG_FILENAMES:
            if (current / filename).exists():
                return current / filename
        current = current.parent
    return None


def get_system_info() -> dict:
    """Get system information including Python and numpy versions."""
    return {
        "platform": platform.system(),
        "platform_version": platform.version(),
        "python_version": sys.version,
        "python_path": sys.executable,
        "numpy_version": np.__version__,
    }


def get_package_version() -> str:
    try:
        return version("osc-rnnt")
    except:  # noqa: E722
        return "unknown"


def get_config_summary(config_path: Optional[Path]) -> dict:
    """Parse and validate the configuration file."""
    result = {"status": "not_found", "error": None, "settings": Settings()}
    if not config_path or not config_path.exists():
        return result
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f) or {}
        result["settings"] = Settings(**raw)
        result["status"] = "parsed"
    except (yaml.YAMLError, ValidationError, TypeError) as e:
        result["status"] = "error"
        result["error"] = str(e)
    return result


def show_check_summary(start: Path | None = None) -> bool:
    """Show a summary of checks. Returns False when the config file has errors."""
    config_path = find_config_file(start or Path.cwd())
    system_info = get_system_info()
    summary = get_config_summary(config_path)

    system_table = Table(show_header=False, box=None)
    system_table.add_column("Key", style="cyan")
    system_table.add_column("Value")
    system_table.add_row("osc-rnnt Version", get_package_version())
    system_table.add_row("Platform", system_info["platform"])
    system_table.add_row("Python Version", system_info["python_version"].split()[0])
    system_table.add_row("Python Path", system_info["python_path"])
    system_table.add_row("numpy Version", system_info["numpy_version"])
    console.print(Panel(system_table, title="System Information", border_style="blue"))

    files_table = Table(show_header=False, box=None)
    files_table.add_column("Setting", style="cyan")
    files_table.add_column("Value")
    status = summary["status"]
    if status == "not_found":
        files_table.add_row("Config File", "[yellow]Not found[/yellow] (using defaults)")
    elif status == "error":
        files_table.add_row("Config File", f"[orange_red1]Errors[/orange_red1] ({config_path})")
        files_table.add_row("Config Error", f"[orange_red1]{summary['error']}[/orange_red1]")
    else:
        files_table.add_row("Config File", f"[green]Found[/green] ({config_path})")

    settings: Settings = summary["settings"]
    d = settings.decoder
    files_table.add_row("Decoder defaults", f"W={d.beam} alpha={d.alpha} margins={d.expand_beam}/{d.state_beam}")
    files_table.add_row("Oracle", f"max_len={d.oracle_max_len or '2T'} budget={d.oracle_budget}")
    b = settings.bench
    files_table.add_row(
        "Bench grid",
        f"{','.join(b.decoders)} x W {b.beams} x alpha {b.alphas}, R={b.repeats}, warmup={b.warmup}",
    )
    files_table.add_row("Workers", str(settings.workers))
    files_table.add_row("Logger", f"{settings.logger.type} ({settings.logger.level})")
    files_table.add_row("Progress Display", str(settings.logger.progress_display))
    files_table.add_row("OpenTelemetry", "enabled" if settings.otel.enabled else "disabled")
    console.print(Panel(files_table, title="Configuration", border_style="blue"))
    return status != "error"


@app.command()
def show(
    path: Optional[str] = typer.Argument(None, help="Path to configuration file to display"),
) -> None:
    """Display the configuration file."""
    config_path = Path(path) if path else find_config_file(Path.cwd())
    if not config_path or not config_path.exists():
        console.print("[red]No configuration file found[/red]")
        raise typer.Exit(1)
    console.print(Panel(config_path.read_text(encoding="utf-8"), title=str(config_path)))


@app.callback(invoke_without_command=True)
def main(ctx: typer.Context) -> None:
    """Check and diagnose osc-rnnt configuration."""
    if ctx.invoked_subcommand is None:
        if not show_check_summary():
            raise typer.Exit(2)
