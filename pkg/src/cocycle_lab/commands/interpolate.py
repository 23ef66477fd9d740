"""interpolate: sign reduction, power map, norm identities and the interpolation inequality."""

from typing import Annotated

import numpy as np
import typer

from cocycle_lab.cocycle import (
    LpVector,
    fixed_point_split,
    interpolation_check,
    nonneg_reduction,
    orbit_center,
    power_map,
    power_map_identities,
    reduction_displacements,
)
from cocycle_lab.commands import FamilyOption, FormatOption, InputOption, OutOption, SeedOption, build_config, guarded
from cocycle_lab.config import DEFAULT_SEED, TOLERANCES
from cocycle_lab.perm_rep import Representation
from cocycle_lab.reports import Report, emit
from cocycle_lab.runconfig import load_vector, random_vectors
from cocycle_lab.utils import log, log_banner

COLUMNS = [
    "sample", "generator", "reduction_before", "reduction_after",
    "left", "right", "ratio", "r_residual", "q_residual",
    "fixed_violation", "zero_components", "holds",
]


def fixed_part_residual(rep: Representation, v_abs: LpVector, p: float, q: float) -> tuple[float, int, float]:
    """Split w = v_abs^(p/q) into a coboundary part and a fixed part z.

    Returns how far z is from being fixed, the number of components where z
    vanishes, and the largest entry left after centering z with those
    components masked out (z is constant per component, so this is ~0).
    """
    w = power_map(v_abs, p, q)
    split = fixed_point_split(rep, w, q)
    centered = orbit_center(split.z, split.components, exclude=split.zero_components)
    spread = float(np.max(np.abs(centered.coords), initial=0.0))
    return split.fixed_violation, sum(split.zero_components), spread


def register(app: typer.Typer) -> None:
    """Register the interpolate command on the shared app."""
    app.command()(interpolate)


def interpolate(
    input_path: InputOption = "",
    family: FamilyOption = "",
    p: Annotated[float, typer.Option("--p", help="Source exponent")] = 2.0,
    q: Annotated[float, typer.Option("--q", help="Target exponent (must exceed p)")] = 4.0,
    vector: Annotated[str, typer.Option(help="Vector JSON file (default: random vectors)")] = "",
    samples: Annotated[int, typer.Option(help="Number of random vectors")] = 1,
    seed: SeedOption = DEFAULT_SEED,
    output_format: FormatOption = "csv",
    out: OutOption = "",
) -> None:
    """Run v -> |v| -> v^(p/q) and check both norm identities and every generator's inequality."""
    config = build_config(
        command="interpolate", input_path=input_path, family=family, p=p, q=q,
        seed=seed, output_format=output_format, out=out,
    )

    with guarded("interpolate"):
        source = config.load()
        rep = source.representation
        if vector:
            vectors = [load_vector(vector, rep.size, p)]
        else:
            vectors = random_vectors(rep.size, p, config.seed, max(1, samples))
        log_banner("interpolate", f"Power-map interpolation p={p} -> q={q}, {len(vectors)} vector(s)", style="bold cyan")

        report = Report("interpolate", COLUMNS)
        for k, v in enumerate(vectors):
            reduction = reduction_displacements(rep, v, p)
            rep_abs, v_abs = nonneg_reduction(rep, v)
            identities = power_map_identities(v_abs, p, q)
            if not identities.holds:
                report.fail(
                    f"sample {k}: power-map identities off by {identities.r_residual:.3e} / {identities.q_residual:.3e}"
                )
            violation, zero_count, spread = fixed_part_residual(rep_abs, v_abs, p, q)
            if max(violation, spread) > TOLERANCES["coboundary_residual"]:
                report.fail(f"sample {k}: fixed part of the power map is off by {max(violation, spread):.3e}")
            rows = interpolation_check(rep_abs, v_abs, p, q)
            if not rows:
                report.add_row(sample=k, generator="", r_residual=identities.r_residual,
                               q_residual=identities.q_residual, fixed_violation=violation,
                               zero_components=zero_count, holds=identities.holds)
            for row in rows:
                before, after = reduction[row.generator]
                report.add_row(
                    sample=k,
                    generator=row.generator,
                    reduction_before=before,
                    reduction_after=after,
                    left=row.left,
                    right=row.right,
                    ratio=row.ratio,
                    r_residual=identities.r_residual,
                    q_residual=identities.q_residual,
                    fixed_violation=violation,
                    zero_components=zero_count,
                    holds=row.holds,
                )
                if not row.holds:
                    report.fail(f"sample {k}, generator {row.generator}: ratio {row.ratio:.6g} > 1")
                if after > before * (1 + TOLERANCES["chain"]) + TOLERANCES["isometry"]:
                    report.fail(f"sample {k}, generator {row.generator}: sign reduction increased displacement")
        report.metadata = {**config.metadata(), "source": source.metadata(), "samples": len(vectors)}
        log("interpolate", f"Checked {len(report.rows)} row(s)", style="cyan")
    emit(report, config.output_format, config.out)
