"""
Helpers shared by the command modules: corpus loading, running a command body inside
a DecoderApp, and the exit-code contract.
"""

import asyncio
from pathlib import Path
from typing import Awaitable, Callable, List, Sequence, TypeVar

import typer
from pydantic import ValidationError

from osc_rnnt.app import DecoderApp
from osc_rnnt.core.error_handling import handle_error
from osc_rnnt.core.exceptions import (
    DataMismatchError,
    FormatError,
    OscRnntError,
    SearchBudgetError,
)
from osc_rnnt.io.feature_file import Features, read_features

T = TypeVar("T")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_MISMATCH = 4

FEATURE_SUFFIX = ".rntf"

Utterance = tuple[str, Features]

CONFIG_OPTION = typer.Option(
    None, "--config", "-c", help="Path to osc-rnnt.config.yaml (default: discovered)"
)


def exit_code_for(e: OscRnntError) -> int:
    if isinstance(e, SearchBudgetError):
        return EXIT_BUDGET
    if isinstance(e, DataMismatchError):
        return EXIT_MISMATCH
    return EXIT_USAGE


def _error_title(e: OscRnntError) -> str:
    if isinstance(e, SearchBudgetError):
        return "Search budget exceeded"
    if isinstance(e, DataMismatchError):
        return "Data mismatch"
    if isinstance(e, FormatError):
        return "Invalid input file"
    return "Invalid usage"


def fail(e: OscRnntError, suggestion: str | None = None) -> typer.Exit:
    """Print the error and return the Exit carrying its code; callers raise it."""
    handle_error(e, _error_title(e), suggestion)
    return typer.Exit(exit_code_for(e))


def expand_feature_paths(paths: Sequence[Path]) -> List[Path]:
    """Files are taken as given; directories contribute their *.rntf files in name order."""
    out: List[Path] = []
    for path in paths:
        if path.is_dir():
            out.extend(sorted(p for p in path.iterdir() if p.suffix == FEATURE_SUFFIX))
        else:
            out.append(path)
    return out


def load_corpus(paths: Sequence[Path]) -> List[Utterance]:
    """Read every feature file; the utterance id is the file stem."""
    files = expand_feature_paths(paths)
    if not files:
        raise typer.BadParameter("no feature files given", param_hint="--features")
    seen: dict[str, Path] = {}
    corpus: List[Utterance] = []
    for path in files:
        if path.stem in seen:
            raise typer.BadParameter(
                f"utterance id '{path.stem}' appears twice ({seen[path.stem]} and {path})",
                param_hint="--features",
            )
        seen[path.stem] = path
        corpus.append((path.stem, read_features(path)))
    return corpus


def run_app(
    name: str,
    config: Path | None,
    body: Callable[[DecoderApp], Awaitable[T]],
) -> T:
    """
    Run `body` inside an initialized DecoderApp and translate OscRnntError into the
    exit-code contract.
    """

    async def _main() -> T:
        app = DecoderApp(name, settings=str(config) if config else None)
        async with app.run() as running:
            return await body(running)

    try:
        return asyncio.run(_main())
    except OscRnntError as e:
        raise fail(e) from e
    except ValidationError as e:
        handle_error(e, "Invalid configuration", "Check the YAML file named with --config")
        raise typer.Exit(EXIT_USAGE) from e
