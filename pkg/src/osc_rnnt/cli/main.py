"""Main CLI entry point for osc-rnnt."""

import typer
from rich.table import Table

from osc_rnnt.cli.commands import (
    bench,
    check_config,
    compare,
    decode,
    evaluate,
    gen_features,
    gen_model,
    stats,
)
from osc_rnnt.cli.terminal import Application

app = typer.Typer(
    help="osc-rnnt - RNN transducer beam search decoders, benchmarks and evaluation",
    add_completion=False,
)

app.add_typer(gen_model.app, name="gen-model", help="Generate a synthetic model file")
app.add_typer(gen_features.app, name="gen-features", help="Generate synthetic feature files")
app.add_typer(decode.app, name="decode", help="Decode feature files into a result log")
app.add_typer(bench.app, name="bench", help="Benchmark decoders over a W x alpha grid")
app.add_typer(stats.app, name="stats", help="Expansion and prefix statistics of the reference search")
app.add_typer(compare.app, name="compare", help="Compare two decoder configurations")
app.add_typer(evaluate.app, name="eval", help="Score a result log against transcripts")
app.add_typer(check_config.app, name="check", help="Show or diagnose osc-rnnt configuration")

# Shared application context
application = Application()


def package_version() -> str:
    from importlib.metadata import version

    try:
        return version("osc-rnnt")
    except:  # noqa: E722
        return "unknown"


def show_welcome() -> None:
    """Show a welcome message with available commands."""
    application.console.print(f"\nosc-rnnt {package_version()}")

    table = Table(title="\nAvailable Commands")
    table.add_column("Command", style="green")
    table.add_column("Description")
    table.add_row("gen-model", "Write a seeded synthetic model (presets: tiny, timit, librispeech)")
    table.add_row("gen-features", "Write synthetic feature files")
    table.add_row("decode", "Decode with greedy, ref, improved, osc, osc-unbatched or oracle")
    table.add_row("bench", "Time decoders over beam widths and alphas (RT-90, W-doubling)")
    table.add_row("stats", "Expansion and prefix-difference ratio tables")
    table.add_row("compare", "Compare two decoder configurations utterance by utterance")
    table.add_row("eval", "Error rate and RT-90 of a result log")
    table.add_row("check", "Show or diagnose the configuration")
    application.console.print(table)

    application.console.print(
        "\n[italic]get started with:[/italic] [cyan]osc-rnnt[/cyan] [green]gen-model[/green] --preset tiny --out model.rntw"
    )


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable verbose mode"),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Disable output"),
    color: bool = typer.Option(True, "--color/--no-color", help="Enable/disable color output"),
    version: bool = typer.Option(False, "--version", help="Show version and exit"),
) -> None:
    """osc-rnnt - decode, benchmark and evaluate RNN transducer beam searches.

    Use --help with any command for detailed usage information.
    """
    application.verbosity = 1 if verbose else 0 if not quiet else -1
    if not color:
        application.console = application.console.__class__(color_system=None)

    if version:
        application.console.print(f"osc-rnnt v{package_version()}")
        raise typer.Exit()

    if ctx.invoked_subcommand is None:
        show_welcome()
