"""diverge: minimal coboundary norms of the arc cocycle across truncation depths."""

from typing import Annotated

import typer

from cocycle_lab.cocycle import divergence_diagnostic, nonexpander_cocycle, word_displacement_bound
from cocycle_lab.commands import FormatOption, OutOption, SeedOption, build_config, guarded
from cocycle_lab.config import DEFAULT_SEED
from cocycle_lab.graphgen import family_metadata, nonexpander_family
from cocycle_lab.reports import Report, emit
from cocycle_lab.runconfig import parse_number_list
from cocycle_lab.utils import log, log_banner

COLUMNS = [
    "depth", "components", "ratio_sum", "declared_bound", "generator_max", "generator_bound",
    "word_max", "word_bound", "qnorm_q", "lower_bound", "residual", "holds",
]


def register(app: typer.Typer) -> None:
    """Register the diverge command on the shared app."""
    app.command()(diverge)


def diverge(
    q: Annotated[float, typer.Option("--q", help="Exponent of the target l_q space")] = 4.0,
    depths: Annotated[str, typer.Option(help="Strictly increasing depths, e.g. '1,2,4,8,16'")] = "1,2,4,8,16",
    arc_fraction: Annotated[float, typer.Option(help="Arc length as a fraction of each cycle")] = 0.5,
    word_length: Annotated[int, typer.Option(help="Longest word for the word-length bound")] = 5,
    seed: SeedOption = DEFAULT_SEED,
    output_format: FormatOption = "csv",
    out: OutOption = "",
) -> None:
    """Divergence table: qnorm^q >= 2^-q * depth and strictly increasing in depth."""
    try:
        depth_list = parse_number_list(depths, int)
    except ValueError as exc:
        raise typer.BadParameter(str(exc)) from None
    config = build_config(
        command="diverge", q=q, depths=depth_list, seed=seed, output_format=output_format, out=out,
    )

    with guarded("diverge"):
        log_banner("diverge", f"Divergence diagnostic, q={q}, depths {depth_list}", style="bold cyan")
        table = divergence_diagnostic(q, depth_list, arc_fraction=arc_fraction)
        report = Report("diverge", COLUMNS)
        families = []
        for row in table.rows:
            family = nonexpander_family(row.depth, arc_fraction=arc_fraction)
            families.append(family_metadata(family))
            built = nonexpander_cocycle(family, q)
            words = word_displacement_bound(family, word_length, q, seed=config.seed)
            report.add_row(
                depth=row.depth,
                components=row.components,
                ratio_sum=family.ratio_sum,
                declared_bound=None if family.declared_bound is None else float(family.declared_bound),
                generator_max=max(built.norms.values(), default=0.0),
                generator_bound=built.bound,
                word_max=words.computed,
                word_bound=words.bound,
                qnorm_q=row.qnorm_q,
                lower_bound=row.lower_bound,
                residual=row.residual,
                holds=row.holds,
            )
            if not row.holds:
                report.fail(f"depth {row.depth}: qnorm^q {row.qnorm_q:.6g} below 2^-q*components {row.lower_bound:.6g}")
            if not built.holds:
                report.fail(f"depth {row.depth}: generator norm above 2*ratio_sum")
            if not words.holds:
                report.fail(f"depth {row.depth}: word bound violated ({'; '.join(words.failures[:3])})")
            if not family.within_bound:
                report.fail(f"depth {row.depth}: ratio_sum {family.ratio_sum:.6g} above declared bound")
        if not table.increasing:
            report.fail("qnorm^q is not strictly increasing in depth")
        report.metadata = {**config.metadata(), "arc_fraction": arc_fraction, "families": families}
        log("diverge", f"Increasing: {table.increasing}", style="cyan")
    emit(report, config.output_format, config.out)
