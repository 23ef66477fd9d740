"""analyze: per-component Cheeger, spectral gap and p-Poincare constants."""

from typing import Annotated, Optional

import typer

from cocycle_lab.classify import classify_regime
from cocycle_lab.commands import (
    FamilyOption,
    FormatOption,
    InputOption,
    OutOption,
    SeedOption,
    build_config,
    guarded,
)
from cocycle_lab.config import DEFAULT_SEED, EXHAUSTIVE_CAP, MAX_LABEL_SIZE, TOLERANCES
from cocycle_lab.errors import ExponentError
from cocycle_lab.perm_rep import orbit_decomposition
from cocycle_lab.reports import Report, emit
from cocycle_lab.spectral import SpectralReport, is_expander_family, report_row, spectral_report
from cocycle_lab.utils import fan_out, format_float, log, log_banner

BASE_COLUMNS = ["component", "size", "degree", "regular", "h", "h_float", "h_method", "lambda1", "bounds"]


def bounds_status(report: SpectralReport) -> str:
    """'ok' / 'violated' for h^2/2k <= lambda_1 <= 2h on regular components with exact h, else ''.

    Pure function.
    """
    if report.cheeger is None or not report.cheeger_exact or not report.regular:
        return ""
    h = float(report.cheeger)
    tol = TOLERANCES["cheeger_bounds"]
    ok = h * h / (2 * report.degree) <= report.lambda1 + tol and report.lambda1 <= 2 * h + tol
    return "ok" if ok else "violated"


def register(app: typer.Typer) -> None:
    """Register the analyze command on the shared app."""
    app.command()(analyze)


def analyze(
    input_path: InputOption = "",
    family: FamilyOption = "",
    p: Annotated[Optional[list[float]], typer.Option("--p", help="p for c_p; repeat for several")] = None,
    seed: SeedOption = DEFAULT_SEED,
    max_exhaustive: Annotated[int, typer.Option(help="Largest component for brute-force Cheeger")] = EXHAUSTIVE_CAP,
    threshold: Annotated[float, typer.Option(help="Expander threshold c for the family verdict")] = 0.1,
    output_format: FormatOption = "csv",
    out: OutOption = "",
) -> None:
    """Per-component spectral diagnostics and the expander-family verdict."""
    config = build_config(
        command="analyze", input_path=input_path, family=family, seed=seed,
        max_exhaustive=max_exhaustive, output_format=output_format, out=out,
    )
    ps = sorted(set(p or []))
    for value in ps:
        if not value > 1:
            raise typer.BadParameter(str(ExponentError(f"--p must lie in (1, inf), got {value}")))

    with guarded("analyze"):
        source = config.load()
        rep = source.representation
        components = orbit_decomposition(rep)
        log_banner("analyze", f"Analyzing {len(components)} component(s) on {rep.size} indices", style="bold cyan")

        def _analyze_component(item):
            k, comp = item
            return spectral_report(comp.graph, ps, cap=config.max_exhaustive, seed=config.seed, component_id=k)

        reports = fan_out(_analyze_component, list(enumerate(components)))

        report = Report("analyze", BASE_COLUMNS + [f"c_{format_float(value)}" for value in ps])
        for item in reports:
            status = bounds_status(item)
            report.add_row(**report_row(item, ps), bounds=status)
            if status == "violated":
                report.fail(f"component {item.component_id}: Cheeger bounds violated (h={item.cheeger}, lambda1={item.lambda1})")

        verdict = is_expander_family(reports, threshold)
        regime = classify_regime(reports, threshold, MAX_LABEL_SIZE)
        report.metadata = {
            **config.metadata(),
            "source": source.metadata(),
            "ps": ps,
            "threshold": threshold,
            "expander_family": verdict,
            "regime": regime,
        }
        log("analyze", f"Expander family (c={threshold}): {verdict}; regime: {regime}", style="cyan")
    emit(report, config.output_format, config.out)
