"""cocycle: check the cocycle identity and solve for a coboundary."""

from typing import Annotated, Optional

import numpy as np
import typer

from cocycle_lab.cocycle import (
    LpVector,
    cocycle_from_dict,
    coboundary_of,
    nonexpander_cocycle,
    solution_to_dict,
    solve_coboundary,
    vector_to_dict,
    verify_cocycle_identity,
)
from cocycle_lab.commands import FamilyOption, FormatOption, InputOption, OutOption, SeedOption, build_config, guarded
from cocycle_lab.config import DEFAULT_SEED, TOLERANCES
from cocycle_lab.errors import CocycleLabError
from cocycle_lab.perm_rep import Representation, apply_array
from cocycle_lab.reports import Report, emit
from cocycle_lab.runconfig import load_vector, random_vectors
from cocycle_lab.utils import log, log_banner, read_json_file

COLUMNS = [
    "generators", "words_checked", "identity_violation", "identity_ok",
    "solved", "residual", "qnorm", "qnorm_power", "recovery_error",
]


def recovery_error(rep: Representation, solution: LpVector, v: LpVector) -> float:
    """max_g ||pi_g(d) - d||_inf for d = solution - v; 0 iff they differ by a fixed vector."""
    d = solution.coords - v.coords
    return max(
        (float(np.max(np.abs(apply_array(perm, d) - d), initial=0.0)) for perm in rep.generators.values()),
        default=0.0,
    )


def register(app: typer.Typer) -> None:
    """Register the cocycle command on the shared app."""
    app.command()(cocycle)


def cocycle(
    input_path: InputOption = "",
    family: FamilyOption = "",
    cocycle_path: Annotated[str, typer.Option("--cocycle", help="Cocycle JSON file")] = "",
    from_vector: Annotated[str, typer.Option(help="Use b = pi(v) - v for v from a JSON file, or 'random'")] = "",
    p: Annotated[float, typer.Option("--p", help="Exponent of the cocycle values")] = 2.0,
    q: Annotated[Optional[float], typer.Option("--q", help="Exponent for the minimal-norm solution (default: p)")] = None,
    max_word_len: Annotated[int, typer.Option(help="Longest sampled word for the identity check")] = 3,
    seed: SeedOption = DEFAULT_SEED,
    output_format: FormatOption = "csv",
    out: OutOption = "",
) -> None:
    """Verify c_gh = pi_g(c_h) + c_g on sampled words and solve pi_g(v) - v = c_g.

    Without --cocycle or --from-vector, a 'nonexpander' family supplies its
    arc cocycle.
    """
    config = build_config(
        command="cocycle", input_path=input_path, family=family, p=p,
        q=q if q is not None and q != p else None, seed=seed, output_format=output_format, out=out,
    )
    target_q = p if q is None else q

    with guarded("cocycle"):
        if cocycle_path and from_vector:
            raise CocycleLabError("give either --cocycle or --from-vector, not both")
        source = config.load()
        rep = source.representation
        vector = None
        if cocycle_path:
            c = cocycle_from_dict(read_json_file(cocycle_path))
            origin = cocycle_path
        elif from_vector:
            if from_vector == "random":
                vector = random_vectors(rep.size, p, config.seed, 1)[0]
            else:
                vector = load_vector(from_vector, rep.size, p)
            c = coboundary_of(rep, vector)
            origin = f"coboundary of {from_vector}"
        elif source.nonexpander is not None:
            c = nonexpander_cocycle(source.nonexpander, target_q).cocycle
            origin = "nonexpander arc cocycle"
        else:
            raise CocycleLabError("no cocycle given; use --cocycle FILE or --from-vector FILE|random")
        if set(c.values) != set(rep.generators):
            raise CocycleLabError(
                f"cocycle generators {sorted(c.values)} do not match representation generators {rep.names}"
            )
        c = c.with_exponent(target_q)

        log_banner("cocycle", f"Cocycle on {rep.size} indices ({origin})", style="bold cyan")
        identity = verify_cocycle_identity(rep, c, max_word_len=max_word_len, seed=config.seed)
        solution = solve_coboundary(rep, c, target_q)

        report = Report("cocycle", COLUMNS)
        recovered = None
        if vector is not None and solution.solved:
            recovered = recovery_error(rep, solution.solution, vector)
        report.add_row(
            generators=len(rep.generators),
            words_checked=identity.words_checked,
            identity_violation=identity.max_violation,
            identity_ok=identity.passed,
            solved=solution.solved,
            residual=solution.residual,
            qnorm=solution.solution_qnorm,
            qnorm_power=solution.qnorm_power,
            recovery_error=recovered,
        )
        if not identity.passed:
            report.fail(f"cocycle identity violated by {identity.max_violation:.3e}")
            for failure in identity.failures:
                report.fail(f"word {failure}")
        if vector is not None:
            scale = max(1.0, float(np.max(np.abs(vector.coords), initial=0.0)))
            if not solution.solved:
                report.fail(f"coboundary not recovered: residual {solution.residual:.3e}")
            elif recovered > TOLERANCES["coboundary_residual"] * scale:
                report.fail(f"solution differs from v by a non-fixed vector ({recovered:.3e})")
        report.metadata = {
            **config.metadata(),
            "source": source.metadata(),
            "cocycle": origin,
            "q": target_q,
            "solution": solution_to_dict(solution),
            "vector": None if vector is None else vector_to_dict(vector),
        }
        verdict = "is a coboundary" if solution.solved else "is not a coboundary at this truncation"
        log("cocycle", f"Cocycle {verdict} (residual {solution.residual:.3e})", style="cyan")
    emit(report, config.output_format, config.out)
