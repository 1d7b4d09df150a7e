"""Command to benchmark decoders over a (decoder, W, alpha) grid."""

from pathlib import Path
from typing import List, Optional

import typer

from osc_rnnt.app import DecoderApp
from osc_rnnt.bench.report import doubling_table, report_table, write_report_jsonl
from osc_rnnt.bench.runner import BenchReport, bench_grid, run_bench
from osc_rnnt.cli.common import CONFIG_OPTION, load_corpus, run_app
from osc_rnnt.console import console
from osc_rnnt.io.model_file import read_model
from osc_rnnt.io.transcripts import read_transcripts

app = typer.Typer(help="Benchmark decoders over a grid of beam widths and alphas")


def parse_list(text: str | None, cast=int) -> list | None:
    """'5,10,20' -> [5, 10, 20]; None stays None."""
    if text is None:
        return None
    try:
        return [cast(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"cannot parse '{text}'") from None


@app.callback(invoke_without_command=True)
def bench(
    model: Path = typer.Option(..., "--model", "-m", help="Model file"),
    features: List[Path] = typer.Option(..., "--features", "-f", help="Feature files or directories"),
    decoders: Optional[str] = typer.Option(None, "--decoders", help="Comma-separated decoder names"),
    beams: Optional[str] = typer.Option(None, "--beams", help="Comma-separated beam widths"),
    alphas: Optional[str] = typer.Option(None, "--alphas", help="Comma-separated alphas (osc)"),
    repeats: Optional[int] = typer.Option(None, "--repeats", "-R", help="Timed runs per utterance"),
    warmup: Optional[bool] = typer.Option(None, "--warmup/--no-warmup", help="Untimed pass first"),
    include_encoder: Optional[bool] = typer.Option(
        None, "--include-encoder/--search-only", help="Time the encoder with the search"
    ),
    transcripts: Optional[Path] = typer.Option(
        None, "--transcripts", "-t", help="Reference transcripts for error rates"
    ),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the report as JSON lines"),
    config: Optional[Path] = CONFIG_OPTION,
) -> None:
    """
    Decode every utterance R times per configuration, strictly one decode at a time, and
    report RT-90, mean RTF and the growth of wall time with W.
    """
    if repeats is not None and repeats < 1:
        raise typer.BadParameter("must be >= 1", param_hint="--repeats")

    async def body(running: DecoderApp) -> BenchReport:
        cfg = running.config
        updates = {
            key: value
            for key, value in {
                "decoders": parse_list(decoders, str),
                "beams": parse_list(beams),
                "alphas": parse_list(alphas),
                "repeats": repeats,
                "warmup": warmup,
                "include_encoder": include_encoder,
            }.items()
            if value is not None
        }
        settings = cfg.bench.model_copy(update=updates)
        specs = bench_grid(settings.decoders, settings.beams, settings.alphas, cfg.decoder)
        w = read_model(model)
        corpus = load_corpus(features)
        refs = read_transcripts(transcripts, w.config.num_labels) if transcripts else None
        return run_bench(
            w,
            corpus,
            specs,
            settings=settings,
            decoder_settings=cfg.decoder,
            transcripts=refs,
        )

    report = run_app("bench", config, body)

    console.print(report_table(report))
    if report.doubling:
        console.print(doubling_table(report))
    for message in report.warnings:
        console.print(f"[yellow]Warning:[/yellow] {message}")
    if out:
        write_report_jsonl(out, report)
        console.print(f"[green]Wrote[/green] {out}")
