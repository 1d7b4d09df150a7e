"""Command to gather expansion and prefix statistics from the reference search."""

from pathlib import Path
from typing import List, Optional

import typer
from rich.table import Table

from osc_rnnt.app import DecoderApp
from osc_rnnt.cli.common import CONFIG_OPTION, Utterance, load_corpus, run_app
from osc_rnnt.console import console
from osc_rnnt.decode.factory import DecoderSpec, run_decoder
from osc_rnnt.decode.hypothesis import DecodeOutput, StepStats
from osc_rnnt.decode.stats import StepRatioTable, aggregate_step_stats
from osc_rnnt.event_progress import ProgressAction
from osc_rnnt.io.model_file import read_model
from osc_rnnt.logging.logger import get_logger

app = typer.Typer(help="Expansion and prefix-difference statistics of the reference search")

logger = get_logger(__name__)


def ratio_table(title: str, column: str, ratios: dict[int, float], total: int) -> Table:
    table = Table(title=title)
    table.add_column(column, justify="right", style="cyan")
    table.add_column("Ratio (%)", justify="right", style="green")
    for bucket, pct in ratios.items():
        table.add_row(str(bucket), f"{pct:.2f}")
    table.add_row("total", f"{sum(ratios.values()):.2f}" if ratios else "-", style="dim")
    table.caption = f"{total} observation(s)"
    return table


def print_tables(table: StepRatioTable) -> None:
    if table.expansions:
        console.print(
            ratio_table("Expansions per surviving hypothesis", "Expansions", table.expansions, table.expansion_total)
        )
    else:
        console.print(
            f"[yellow]No hypothesis was expanded:[/yellow] all {table.zero_expansions} "
            "surviving hypotheses kept their length within the frame."
        )
    if table.zero_expansions:
        console.print(f"[dim]{table.zero_expansions} zero-expansion survivor(s) excluded from the table[/dim]")
    if table.prefix_diffs:
        console.print(
            ratio_table("Prefix length differences", "Difference", table.prefix_diffs, table.prefix_total)
        )
    else:
        console.print("[yellow]No prefix pairs were found in any beam.[/yellow]")


@app.callback(invoke_without_command=True)
def stats(
    model: Path = typer.Option(..., "--model", "-m", help="Model file"),
    features: List[Path] = typer.Option(..., "--features", "-f", help="Feature files or directories"),
    beam: Optional[int] = typer.Option(None, "--beam", "-W", help="Beam width"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Also write the ratio tables as one JSON line"),
    config: Optional[Path] = CONFIG_OPTION,
) -> None:
    """Run the instrumented reference search over the corpus and print the ratio tables."""

    async def body(running: DecoderApp) -> StepRatioTable:
        spec = DecoderSpec.create(name="ref", beam=beam).resolved(running.config.decoder)
        w = read_model(model)
        corpus = load_corpus(features)

        def decode_one(utt: Utterance) -> DecodeOutput:
            return run_decoder(spec, w, utt[1].frames, instrument=True, settings=running.config.decoder)

        logger.info(
            f"Collecting statistics over {len(corpus)} utterance(s)",
            data={"progress_action": ProgressAction.DECODING, "target": spec.label, "task_name": "stats"},
        )
        outputs = await running.executor.map(decode_one, corpus)
        for output in outputs:
            if isinstance(output, BaseException):
                raise output
        return aggregate_step_stats(output.step_stats or StepStats() for output in outputs)

    table = run_app("stats", config, body)
    print_tables(table)
    if out is not None:
        Path(out).write_text(table.model_dump_json() + "\n", encoding="utf-8")
        console.print(f"[green]Wrote[/green] {out}")
