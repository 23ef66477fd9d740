"""generate: write a generated representation as JSON, with a metadata sidecar."""

import json
import os
from typing import Annotated

import typer

from cocycle_lab.commands import OutOption, SeedOption, build_config, guarded
from cocycle_lab.config import DEFAULT_SEED, RNG_ALGORITHM
from cocycle_lab.errors import CocycleLabError
from cocycle_lab.perm_rep import dump_representation
from cocycle_lab.utils import log
from cocycle_lab.version import PACKAGE_VERSION


def _write(path: str, text: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def register(app: typer.Typer) -> None:
    """Register the generate command on the shared app."""
    app.command()(generate)


def generate(
    family: Annotated[str, typer.Argument(help="Family spec, e.g. 'random-regular 16 2' or 'nonexpander 4'")],
    seed: SeedOption = DEFAULT_SEED,
    out: OutOption = "",
    meta: Annotated[str, typer.Option(help="Write family metadata JSON here")] = "",
) -> None:
    """Generate a representation and print (or --out) its JSON."""
    config = build_config(command="generate", family=family, seed=seed, out=out)

    with guarded("generate"):
        if not config.family.strip():
            raise CocycleLabError("family spec is empty")
        source = config.load()
        text = dump_representation(source.representation)
        if config.out:
            _write(config.out, text)
            log("generate", f"Wrote {source.name} ({source.representation.size} indices) to {config.out}", style="green")
        else:
            typer.echo(text, nl=False)
        if meta:
            sidecar = {"version": PACKAGE_VERSION, "rng": RNG_ALGORITHM, **source.metadata()}
            _write(meta, json.dumps(sidecar, indent=2) + "\n")
