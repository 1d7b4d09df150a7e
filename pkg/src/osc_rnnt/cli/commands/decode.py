"""Command to decode feature files into a result log."""

from pathlib import Path
from typing import List, Optional

import typer
from rich.table import Table

from osc_rnnt.app import DecoderApp
from osc_rnnt.cli.common import CONFIG_OPTION, Utterance, load_corpus, run_app
from osc_rnnt.config import DecoderSettings
from osc_rnnt.console import console, error_console
from osc_rnnt.core.exceptions import SearchBudgetError
from osc_rnnt.decode.factory import DECODER_NAMES, DecoderSpec, run_decoder
from osc_rnnt.event_progress import ProgressAction
from osc_rnnt.io.model_file import read_model
from osc_rnnt.io.result_log import ResultRecord, append_results
from osc_rnnt.logging.logger import get_logger
from osc_rnnt.logging.tracing import telemetry
from osc_rnnt.model.weights import ModelWeights
from osc_rnnt.progress_display import progress_display

app = typer.Typer(help="Decode feature files with one decoder configuration")

logger = get_logger(__name__)


def decoder_spec(
    decoder: str,
    *,
    beam: int | None = None,
    alpha: int | None = None,
    expand_beam: float | None = None,
    state_beam: float | None = None,
    max_len: int | None = None,
    budget: int | None = None,
    defaults: DecoderSettings | None = None,
) -> DecoderSpec:
    """Build the decoder configuration from command line flags; conflicting flags raise DecoderSpecError."""
    defaults = defaults or DecoderSettings()
    spec = DecoderSpec.create(
        name=decoder,
        beam=beam,
        alpha=alpha,
        expand_beam=expand_beam,
        state_beam=state_beam,
        max_len=max_len,
        budget=budget,
    )
    if spec.name in ("osc", "osc-unbatched") and alpha is None:
        error_console.print(
            f"Notice: no --alpha given for {spec.name}, using alpha={defaults.alpha}",
            style="yellow",
            markup=False,
        )
    return spec.resolved(defaults)


def to_record(utt_id: str, audio_ms: int, spec: DecoderSpec, output) -> ResultRecord:
    return ResultRecord(
        utterance_id=utt_id,
        decoder=spec.name,
        beam=spec.beam,
        alpha=spec.alpha,
        expand_beam=spec.expand_beam,
        state_beam=spec.state_beam,
        labels=list(output.labels),
        logp=output.logp,
        score=output.score,
        wall_time_ms=output.wall_time * 1000.0,
        audio_duration_ms=audio_ms,
    )


@telemetry.traced("decode.corpus")
async def decode_corpus(
    running: DecoderApp,
    w: ModelWeights,
    corpus: List[Utterance],
    spec: DecoderSpec,
    *,
    out: Path | None = None,
) -> List[ResultRecord]:
    """
    Decode every utterance on the executor's worker threads; records keep input order.
    When some utterances exceed the search budget the others are appended to `out`
    before SearchBudgetError is raised.
    """
    settings = running.config.decoder

    def decode_one(utt: Utterance) -> ResultRecord:
        utt_id, features = utt
        output = run_decoder(spec, w, features.frames, settings=settings)
        logger.info(
            f"Decoded {utt_id}",
            data={
                "progress_action": ProgressAction.DECODING,
                "target": utt_id,
                "details": spec.label,
                "task_name": running.name,
            },
        )
        return to_record(utt_id, features.duration_ms, spec, output)

    results = await running.executor.map(decode_one, corpus)
    for result in results:
        if isinstance(result, BaseException) and not isinstance(result, SearchBudgetError):
            raise result

    over_budget = [
        (utt_id, result)
        for (utt_id, _), result in zip(corpus, results)
        if isinstance(result, SearchBudgetError)
    ]
    if over_budget:
        table = Table(title="Utterances over the search budget")
        table.add_column("Utterance", style="cyan")
        table.add_column("Reason")
        for utt_id, err in over_budget:
            table.add_row(utt_id, err.message)
        done = [result for result in results if isinstance(result, ResultRecord)]
        if out is not None and done:
            append_results(out, done)
        with progress_display.paused():
            error_console.print(table)
            if out is not None and done:
                error_console.print(f"Appended {len(done)} finished record(s) to {out}", markup=False)
        first = over_budget[0][1]
        logger.error(
            f"{len(over_budget)} utterance(s) over the search budget",
            data={
                "progress_action": ProgressAction.FATAL_ERROR,
                "target": spec.label,
                "task_name": running.name,
                "error_message": first.message,
            },
        )
        raise SearchBudgetError(
            f"{len(over_budget)} of {len(corpus)} utterance(s) exceeded the search budget",
            first.details,
        )
    return results


@app.callback(invoke_without_command=True)
def decode(
    model: Path = typer.Option(..., "--model", "-m", help="Model file"),
    features: List[Path] = typer.Option(..., "--features", "-f", help="Feature files or directories"),
    decoder: str = typer.Option(
        "osc", "--decoder", "-d", help=f"One of: {', '.join(DECODER_NAMES)}"
    ),
    beam: Optional[int] = typer.Option(None, "--beam", "-W", help="Beam width"),
    alpha: Optional[int] = typer.Option(None, "--alpha", help="Prefix length-difference cap (osc)"),
    expand_beam: Optional[float] = typer.Option(None, "--expand-beam", help="Label margin (improved)"),
    state_beam: Optional[float] = typer.Option(None, "--state-beam", help="Early-exit margin (improved)"),
    max_len: Optional[int] = typer.Option(None, "--max-len", help="Longest sequence (oracle)"),
    budget: Optional[int] = typer.Option(None, "--budget", help="Enumeration budget (oracle)"),
    out: Path = typer.Option(Path("results.jsonl"), "--out", "-o", help="Result log to append to"),
    config: Optional[Path] = CONFIG_OPTION,
) -> None:
    """Decode every utterance and append one ResultLog record per utterance."""

    async def body(running: DecoderApp) -> List[ResultRecord]:
        spec = decoder_spec(
            decoder,
            beam=beam,
            alpha=alpha,
            expand_beam=expand_beam,
            state_beam=state_beam,
            max_len=max_len,
            budget=budget,
            defaults=running.config.decoder,
        )
        w = read_model(model)
        corpus = load_corpus(features)
        return await decode_corpus(running, w, corpus, spec, out=out)

    records = run_app("decode", config, body)
    append_results(out, records)

    table = Table(title=f"Decoded {len(records)} utterance(s)")
    table.add_column("Utterance", style="cyan")
    table.add_column("Labels")
    table.add_column("log p", justify="right")
    table.add_column("Score", justify="right")
    for record in records:
        labels = " ".join(str(label) for label in record.labels)
        table.add_row(
            record.utterance_id,
            labels if len(labels) <= 60 else labels[:57] + "...",
            f"{record.logp:.4f}",
            f"{record.score:.4f}",
        )
    console.print(table)
    console.print(f"[green]Appended[/green] {len(records)} record(s) to {out}")
