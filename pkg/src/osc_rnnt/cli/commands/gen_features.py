"""Command to write synthetic feature files."""

from pathlib import Path

import numpy as np
import typer

from osc_rnnt.cli.common import FEATURE_SUFFIX, fail
from osc_rnnt.console import console
from osc_rnnt.core.exceptions import OscRnntError
from osc_rnnt.io.feature_file import write_features
from osc_rnnt.io.synth import FRAME_SHIFT_MS, synth_features

app = typer.Typer(help="Generate synthetic feature files")


def utterance_lengths(count: int, min_frames: int, max_frames: int, seed: int) -> list[int]:
    rng = np.random.default_rng(seed)
    return [int(t) for t in rng.integers(min_frames, max_frames + 1, size=count)]


@app.callback(invoke_without_command=True)
def gen_features(
    out_dir: Path = typer.Option(..., "--out-dir", "-o", help="Directory for the feature files"),
    dims: int = typer.Option(..., "--dims", "-F", help="Feature dimension F"),
    count: int = typer.Option(1, "--count", "-n", help="Number of utterances"),
    min_frames: int = typer.Option(100, "--min-frames", help="Shortest utterance, in frames"),
    max_frames: int = typer.Option(100, "--max-frames", help="Longest utterance, in frames"),
    seed: int = typer.Option(0, "--seed", help="Seed for lengths and features"),
    prefix: str = typer.Option("utt", "--prefix", help="File name prefix"),
) -> None:
    """
    Write COUNT standard-normal FeatureFiles; utterance i uses seed + i + 1 and its audio
    duration is T frames at a 10 ms shift.
    """
    if count < 1:
        raise typer.BadParameter("must be >= 1", param_hint="--count")
    if not 1 <= min_frames <= max_frames:
        raise typer.BadParameter("need 1 <= --min-frames <= --max-frames", param_hint="--min-frames")

    out_dir.mkdir(parents=True, exist_ok=True)
    lengths = utterance_lengths(count, min_frames, max_frames, seed)
    try:
        for i, frames in enumerate(lengths):
            utt = synth_features(frames, dims, seed + i + 1)
            write_features(out_dir / f"{prefix}{i:04d}{FEATURE_SUFFIX}", utt.frames, utt.duration_ms)
    except OscRnntError as e:
        raise fail(e) from e
    console.print(
        f"[green]Wrote[/green] {count} utterance(s) of {min_frames}-{max_frames} frames "
        f"({FRAME_SHIFT_MS} ms shift, F={dims}) to {out_dir}"
    )
