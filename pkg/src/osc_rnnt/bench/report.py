"""
Rendering of benchmark reports: a rich table for people, JSON lines for tooling.
"""

from pathlib import Path

from rich.table import Table

from osc_rnnt.bench.runner import BenchReport


def _fmt(value: float | None, spec: str = ".4f") -> str:
    return "-" if value is None else format(value, spec)


def report_table(report: BenchReport) -> Table:
    table = Table(title="Decoding benchmark", show_lines=False)
    table.add_column("Decoder", style="cyan")
    table.add_column("W", justify="right")
    table.add_column("α / margins", justify="right")
    table.add_column("RT-90", justify="right", style="green")
    table.add_column("Mean RTF", justify="right")
    table.add_column("Error rate", justify="right")
    table.add_column("Utts", justify="right")

    for cell in report.cells:
        if cell.alpha is not None:
            knobs = str(cell.alpha)
        elif cell.expand_beam is not None:
            knobs = f"{cell.expand_beam:g}/{cell.state_beam:g}"
        else:
            knobs = "-"
        rate = _fmt(cell.error_rate)
        if cell.empty_refs:
            rate += f" ({cell.empty_refs} empty ref)"
        table.add_row(
            cell.decoder,
            "-" if cell.beam is None else str(cell.beam),
            knobs,
            _fmt(cell.rt90),
            _fmt(cell.mean_rtf),
            rate,
            str(cell.utterances),
        )
    return table


def doubling_table(report: BenchReport) -> Table:
    table = Table(title="Wall time growth with W")
    table.add_column("Series", style="cyan")
    table.add_column("W → W'", justify="right")
    table.add_column("time(W')/time(W)", justify="right", style="green")
    for row in report.doubling:
        table.add_row(row.series, f"{row.beam} → {row.next_beam}", f"{row.ratio:.3f}")
    return table


def write_report_jsonl(path: str | Path, report: BenchReport) -> None:
    """One line per cell, then one line per doubling ratio, then a summary line."""
    lines = [
        cell.model_dump_json(exclude={"low_tick_utterances"}) for cell in report.cells
    ]
    lines.extend(row.model_dump_json() for row in report.doubling)
    lines.append(report.model_dump_json(exclude={"cells", "doubling"}))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
