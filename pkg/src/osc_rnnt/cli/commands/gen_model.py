"""Command to generate a seeded synthetic model file."""

from pathlib import Path
from typing import Optional

import typer
from rich.table import Table

from osc_rnnt.cli.common import fail
from osc_rnnt.console import console
from osc_rnnt.core.exceptions import OscRnntError
from osc_rnnt.io.model_file import write_model
from osc_rnnt.model.types import PRESETS, ModelConfig, get_preset
from osc_rnnt.model.weights import init_model, parameter_count

app = typer.Typer(help="Generate a synthetic RNN-T model file")


def build_config(preset: str | None, **overrides: Optional[int]) -> ModelConfig:
    """Start from a preset (or nothing) and apply the explicitly given fields."""
    fields = get_preset(preset).model_dump() if preset else {}
    fields.update({key: value for key, value in overrides.items() if value is not None})
    return ModelConfig.create(**fields)


@app.callback(invoke_without_command=True)
def gen_model(
    out: Path = typer.Option(..., "--out", "-o", help="Model file to write"),
    preset: Optional[str] = typer.Option(
        None, "--preset", "-p", help=f"Architecture preset: {', '.join(PRESETS)}"
    ),
    seed: int = typer.Option(0, "--seed", help="Initialisation seed"),
    input_dim: Optional[int] = typer.Option(None, "--input-dim", help="Feature dimension F"),
    enc_layers: Optional[int] = typer.Option(None, "--enc-layers"),
    enc_hidden: Optional[int] = typer.Option(None, "--enc-hidden", help="Hidden size D"),
    pred_layers: Optional[int] = typer.Option(None, "--pred-layers"),
    pred_hidden: Optional[int] = typer.Option(None, "--pred-hidden", help="Must equal D"),
    joint_dim: Optional[int] = typer.Option(None, "--joint-dim"),
    num_labels: Optional[int] = typer.Option(None, "--num-labels", help="|K|, excluding blank"),
    blank_bias: float = typer.Option(
        0.0, "--blank-bias", help="Added to the blank output bias; positive values make frames cheap to decode"
    ),
) -> None:
    """Write a ModelFile with weights drawn from a seeded uniform distribution."""
    try:
        config = build_config(
            preset,
            input_dim=input_dim,
            enc_layers=enc_layers,
            enc_hidden=enc_hidden,
            pred_layers=pred_layers,
            pred_hidden=pred_hidden,
            joint_dim=joint_dim,
            num_labels=num_labels,
        )
        write_model(out, init_model(config, seed, blank_bias))
    except OscRnntError as e:
        raise fail(e, "Use --preset or give every dimension flag") from e

    table = Table(show_header=False, box=None)
    table.add_column("Field", style="cyan")
    table.add_column("Value")
    for key, value in config.model_dump().items():
        table.add_row(key, str(value))
    table.add_row("parameters", f"{parameter_count(config):,}")
    table.add_row("seed", str(seed))
    if blank_bias:
        table.add_row("blank bias", f"{blank_bias:g}")
    console.print(table)
    console.print(f"[green]Wrote[/green] {out}")
