"""Command to decode a corpus under two configurations and compare the results."""

import math
from pathlib import Path
from typing import List, Optional, Sequence

import typer
from pydantic import BaseModel
from rich.table import Table

from osc_rnnt.app import DecoderApp
from osc_rnnt.cli.common import CONFIG_OPTION, Utterance, load_corpus, run_app
from osc_rnnt.console import console
from osc_rnnt.decode.factory import DecoderSpec, run_decoder
from osc_rnnt.decode.hypothesis import DecodeOutput, FrameTrace
from osc_rnnt.io.model_file import read_model

app = typer.Typer(help="Compare two decoder configurations utterance by utterance")


class Comparison(BaseModel):
    utterance_id: str
    agree: bool
    logp_delta: float
    """logp(A) - logp(B); 0 when both are -inf"""
    first_divergent_frame: int | None = None


class ComparisonSummary(BaseModel):
    a: str
    b: str
    utterances: int
    agreed: int
    agreement: float
    """Percentage of utterances with identical labels"""


def first_divergence(a: Sequence[FrameTrace] | None, b: Sequence[FrameTrace] | None) -> int | None:
    """First frame whose beam label sets differ (order within a beam is ignored)."""
    if a is None or b is None:
        return None
    for t, (beam_a, beam_b) in enumerate(zip(a, b)):
        if sorted(beam_a) != sorted(beam_b):
            return t
    if len(a) != len(b):
        return min(len(a), len(b))
    return None


def summarize(label_a: str, label_b: str, results: Sequence[Comparison]) -> ComparisonSummary:
    agreed = sum(r.agree for r in results)
    return ComparisonSummary(
        a=label_a,
        b=label_b,
        utterances=len(results),
        agreed=agreed,
        agreement=100.0 * agreed / len(results) if results else 0.0,
    )


def write_comparison_jsonl(path: str | Path, results: Sequence[Comparison], summary: ComparisonSummary) -> None:
    """One line per utterance, then the summary line."""
    lines = [r.model_dump_json() for r in results]
    lines.append(summary.model_dump_json())
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def compare_outputs(utt_id: str, a: DecodeOutput, b: DecodeOutput) -> Comparison:
    if math.isinf(a.logp) and math.isinf(b.logp) and a.logp == b.logp:
        delta = 0.0
    else:
        delta = a.logp - b.logp
    return Comparison(
        utterance_id=utt_id,
        agree=a.labels == b.labels,
        logp_delta=delta,
        first_divergent_frame=first_divergence(a.trace, b.trace),
    )


@app.callback(invoke_without_command=True)
def compare(
    model: Path = typer.Option(..., "--model", "-m", help="Model file"),
    features: List[Path] = typer.Option(..., "--features", "-f", help="Feature files or directories"),
    config_a: str = typer.Option(..., "--a", help='Configuration A, e.g. "osc:beam=4,alpha=2"'),
    config_b: str = typer.Option(..., "--b", help='Configuration B, e.g. "osc-unbatched:beam=4,alpha=2"'),
    trace: bool = typer.Option(True, "--trace/--no-trace", help="Record beams to find the divergent frame"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Also write the comparison as JSON lines"),
    config: Optional[Path] = CONFIG_OPTION,
) -> None:
    """Report label agreement, log-probability deltas and the first divergent frame."""

    async def body(running: DecoderApp) -> tuple[str, str, List[Comparison]]:
        defaults = running.config.decoder
        spec_a = DecoderSpec.parse(config_a).resolved(defaults)
        spec_b = DecoderSpec.parse(config_b).resolved(defaults)
        w = read_model(model)
        corpus = load_corpus(features)

        def compare_one(utt: Utterance) -> Comparison:
            utt_id, feats = utt
            out_a = run_decoder(spec_a, w, feats.frames, trace=trace, settings=defaults)
            out_b = run_decoder(spec_b, w, feats.frames, trace=trace, settings=defaults)
            return compare_outputs(utt_id, out_a, out_b)

        results = await running.executor.map(compare_one, corpus)
        for result in results:
            if isinstance(result, BaseException):
                raise result
        return spec_a.label, spec_b.label, results

    label_a, label_b, results = run_app("compare", config, body)

    table = Table(title=f"A = {label_a}   B = {label_b}")
    table.add_column("Utterance", style="cyan")
    table.add_column("Labels", justify="center")
    table.add_column("logp(A) - logp(B)", justify="right")
    table.add_column("First divergent frame", justify="right")
    for r in results:
        table.add_row(
            r.utterance_id,
            "[green]same[/green]" if r.agree else "[red]differ[/red]",
            f"{r.logp_delta:+.3e}",
            "-" if r.first_divergent_frame is None else str(r.first_divergent_frame),
        )
    console.print(table)

    summary = summarize(label_a, label_b, results)
    console.print(f"Agreement: {summary.agreed}/{summary.utterances} ({summary.agreement:.2f}%)")
    if out is not None:
        write_comparison_jsonl(out, results, summary)
        console.print(f"[green]Wrote[/green] {out}")
