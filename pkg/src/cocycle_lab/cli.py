"""CLI app definition and command registration."""

from typing import Annotated

import typer

from cocycle_lab.utils import console
from cocycle_lab.version import get_version


def _version_callback(value: bool):
    if value:
        console.print(get_version())
        raise typer.Exit()


app = typer.Typer(
    help="Finite-truncation diagnostics for signed-permutation actions on l_p spaces.",
    no_args_is_help=True,
)


@app.callback()
def main(
    version: Annotated[
        bool,
        typer.Option("--version", "-v", help="Show version and exit.", callback=_version_callback, is_eager=True),
    ] = False,
) -> None:
    """Cheeger constants, cocycles and coboundaries of signed-permutation representations."""

# Register commands from submodules
from cocycle_lab.commands import analyze as _analyze_mod
from cocycle_lab.commands import classify as _classify_mod
from cocycle_lab.commands import cocycle as _cocycle_mod
from cocycle_lab.commands import diverge as _diverge_mod
from cocycle_lab.commands import generate as _generate_mod
from cocycle_lab.commands import interpolate as _interpolate_mod

_analyze_mod.register(app)
_cocycle_mod.register(app)
_interpolate_mod.register(app)
_classify_mod.register(app)
_generate_mod.register(app)
_diverge_mod.register(app)
