"""Command to score a result log against reference transcripts."""

from pathlib import Path
from typing import Dict, List, Mapping, Optional

import typer
from pydantic import BaseModel
from rich.table import Table

from osc_rnnt.cli.common import fail
from osc_rnnt.console import console
from osc_rnnt.core.exceptions import DataMismatchError, OscRnntError
from osc_rnnt.decode.hypothesis import Labels
from osc_rnnt.io.result_log import ResultRecord, index_results, read_results
from osc_rnnt.io.transcripts import read_transcripts
from osc_rnnt.metrics import TimingSample, corpus_error_rate, mean_rtf, percentile, rtf

app = typer.Typer(help="Score decoded results against reference transcripts")


class EvalRow(BaseModel):
    config: str
    utterances: int
    error_rate: float
    substitutions: int
    insertions: int
    deletions: int
    ref_len: int
    empty_refs: int
    rt90: float
    mean_rtf: float


def group_by_config(records: List[ResultRecord]) -> Dict[str, Dict[str, ResultRecord]]:
    groups: Dict[str, List[ResultRecord]] = {}
    for record in records:
        groups.setdefault(record.config_label, []).append(record)
    return {label: index_results(items) for label, items in groups.items()}


def evaluate_results(records: List[ResultRecord], refs: Mapping[str, Labels]) -> List[EvalRow]:
    """
    One row per decoder configuration in the log. Every configuration must cover exactly
    the transcript's utterances; otherwise DataMismatchError lists the unmatched ids.
    """
    if not records:
        raise DataMismatchError("The result log is empty")
    rows: List[EvalRow] = []
    missing: List[str] = []
    for label, by_id in group_by_config(records).items():
        missing.extend(f"{label}: no transcript for {u}" for u in by_id if u not in refs)
        missing.extend(f"{label}: no result for {u}" for u in refs if u not in by_id)
    if missing:
        raise DataMismatchError(
            f"{len(missing)} utterance id(s) do not match between results and transcripts",
            "\n".join(missing),
            missing=missing,
        )

    for label, by_id in group_by_config(records).items():
        corpus = corpus_error_rate((list(r.labels), refs[u]) for u, r in by_id.items())
        samples = [
            TimingSample(wall_time=r.wall_time_ms / 1000.0, audio_duration=r.audio_duration_ms / 1000.0)
            for r in by_id.values()
        ]
        rows.append(
            EvalRow(
                config=label,
                utterances=corpus.utterances,
                error_rate=corpus.rate,
                substitutions=corpus.ops.substitutions,
                insertions=corpus.ops.insertions,
                deletions=corpus.ops.deletions,
                ref_len=corpus.ref_len,
                empty_refs=corpus.empty_refs,
                rt90=percentile([rtf(s) for s in samples], 90),
                mean_rtf=mean_rtf(samples),
            )
        )
    return rows


@app.callback(invoke_without_command=True)
def evaluate(
    results: Path = typer.Option(..., "--results", "-r", help="Result log (JSON lines)"),
    transcripts: Path = typer.Option(..., "--transcripts", "-t", help="Reference transcript file"),
    num_labels: Optional[int] = typer.Option(
        None, "--num-labels", help="|K|, to check transcript label ranges"
    ),
) -> None:
    """Join results with transcripts on utterance id and print corpus error rate and RT-90."""
    try:
        refs = read_transcripts(transcripts, num_labels)
        rows = evaluate_results(read_results(results), refs)
    except DataMismatchError as e:
        raise fail(e, "Decode the missing utterances or fix the transcript file") from e
    except OscRnntError as e:
        raise fail(e) from e

    table = Table(title="Evaluation")
    table.add_column("Configuration", style="cyan")
    table.add_column("Utts", justify="right")
    table.add_column("Error rate", justify="right", style="green")
    table.add_column("S / I / D", justify="right")
    table.add_column("RT-90", justify="right")
    table.add_column("Mean RTF", justify="right")
    for row in rows:
        table.add_row(
            row.config,
            str(row.utterances),
            f"{row.error_rate:.4f}",
            f"{row.substitutions} / {row.insertions} / {row.deletions}",
            f"{row.rt90:.4f}",
            f"{row.mean_rtf:.4f}",
        )
    console.print(table)
    for row in rows:
        if row.empty_refs:
            console.print(
                f"[yellow]Note:[/yellow] {row.config}: {row.empty_refs} empty reference(s), "
                "their edits count against a length of 1"
            )
