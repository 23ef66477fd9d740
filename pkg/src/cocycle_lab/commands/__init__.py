"""CLI commands. Each module exposes register(app)."""

from collections.abc import Iterator
from contextlib import contextmanager
from typing import Annotated

import typer

from cocycle_lab.errors import CocycleLabError
from cocycle_lab.runconfig import RunConfig
from cocycle_lab.utils import log

# Shared option types
InputOption = Annotated[str, typer.Option("--input", "-i", help="Representation JSON file")]
FamilyOption = Annotated[str, typer.Option("--family", "-f", help="Generated family, e.g. 'cycle 8' or 'margulis 4'")]
SeedOption = Annotated[int, typer.Option(help="Seed for every random choice")]
FormatOption = Annotated[str, typer.Option("--format", help="Output format: csv or json")]
OutOption = Annotated[str, typer.Option("--out", "-o", help="Output path (default: stdout)")]


def build_config(**kwargs) -> RunConfig:
    """RunConfig from CLI flags; invalid flag combinations are usage errors (exit code 2)."""
    try:
        return RunConfig(**kwargs)
    except CocycleLabError as exc:
        raise typer.BadParameter(str(exc)) from None


@contextmanager
def guarded(channel: str) -> Iterator[None]:
    """Turn library errors into an ERROR line and exit code 1."""
    try:
        yield
    except CocycleLabError as exc:
        log(channel, f"ERROR: {exc}", style="bold red")
        raise typer.Exit(1) from None
