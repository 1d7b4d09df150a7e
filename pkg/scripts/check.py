# /// script
# requires-python = ">=3.10"
# dependencies = [
#     "ruff",
#     "typer",
# ]
# ///
"""Run ruff lint and the format check over src/ and tests/, optionally fixing both."""

import subprocess
import sys

import typer
from rich import print

TARGETS = ["src", "tests"]


def run(command: list[str]) -> int:
    print(f"[dim]$ {' '.join(command)}[/dim]")
    try:
        return subprocess.run(command, stdout=sys.stdout, stderr=sys.stderr).returncode
    except FileNotFoundError:
        print("Error: `ruff` command not found. Make sure it's installed in the environment.")
        return 1


def main(fix: bool = typer.Option(False, "--fix", help="Apply fixes and reformat")) -> None:
    lint = ["ruff", "check", *TARGETS] + (["--fix"] if fix else [])
    fmt = ["ruff", "format", *TARGETS] + ([] if fix else ["--check"])
    codes = [run(lint), run(fmt)]
    sys.exit(max(codes))


if __name__ == "__main__":
    typer.run(main)
