"""classify: equivalence classes of bounded components, the covering set and the base-point chain."""

from typing import Annotated

import typer

from cocycle_lab.classify import (
    bounded_case_coboundary,
    covering_set,
    covering_to_dict,
    equivalence_classes,
    label_components,
    partition_to_dict,
    restriction_key,
)
from cocycle_lab.commands import FamilyOption, FormatOption, InputOption, OutOption, SeedOption, build_config, guarded
from cocycle_lab.config import DEFAULT_SEED, MAX_LABEL_SIZE
from cocycle_lab.perm_rep import evaluate_word, format_word, orbit_decomposition, random_word, unsigned
from cocycle_lab.reports import Report, emit
from cocycle_lab.runconfig import load_vector, random_vectors
from cocycle_lab.utils import log, log_banner, make_rng

COLUMNS = [
    "sample", "components", "classes", "q_order", "q_displacement", "tilde_power",
    "chain_ok", "fixed_violation", "coboundary_violation", "holds",
]

COVERING_WORDS = 200
COVERING_WORD_LENGTH = 10


def register(app: typer.Typer) -> None:
    """Register the classify command on the shared app."""
    app.command()(classify)


def classify(
    input_path: InputOption = "",
    family: FamilyOption = "",
    max_size: Annotated[int, typer.Option("--max-size", "-d", help="Component size bound D")] = MAX_LABEL_SIZE,
    p: Annotated[float, typer.Option("--p", help="Exponent of the chain check")] = 2.0,
    vector: Annotated[str, typer.Option(help="Vector JSON file (default: random vectors)")] = "",
    samples: Annotated[int, typer.Option(help="Number of random vectors")] = 1,
    seed: SeedOption = DEFAULT_SEED,
    output_format: FormatOption = "csv",
    out: OutOption = "",
) -> None:
    """Label components, group them into classes, close the covering set and check the chain."""
    config = build_config(
        command="classify", input_path=input_path, family=family, p=p,
        seed=seed, output_format=output_format, out=out,
    )

    with guarded("classify"):
        source = config.load()
        rep = source.representation
        plain = unsigned(rep)
        components = orbit_decomposition(plain)
        labels = label_components(plain, max_size, components)
        classes = equivalence_classes(labels)
        covering = covering_set(labels, classes)
        log_banner(
            "classify",
            f"{len(components)} component(s), {len(classes)} class(es), |Q| = {covering.order}",
            style="bold cyan",
        )

        report = Report("classify", COLUMNS)
        rng = make_rng(config.seed)
        for _ in range(COVERING_WORDS):
            word = random_word(plain, int(rng.integers(1, COVERING_WORD_LENGTH + 1)), rng)
            if not covering.contains(restriction_key(evaluate_word(plain, word), covering)):
                report.fail(f"word {format_word(word)} has no representative in Q")

        if vector:
            vectors = [load_vector(vector, rep.size, p)]
        else:
            vectors = random_vectors(rep.size, p, config.seed, max(1, samples))
        for k, v in enumerate(vectors):
            _, chain = bounded_case_coboundary(rep, v, covering, p, labels=labels, classes=classes)
            report.add_row(
                sample=k,
                components=len(components),
                classes=len(classes),
                q_order=covering.order,
                q_displacement=chain.q_displacement,
                tilde_power=chain.tilde_power,
                chain_ok=chain.chain_holds,
                fixed_violation=chain.fixed_violation,
                coboundary_violation=chain.coboundary_violation,
                holds=chain.holds,
            )
            if not chain.holds:
                report.fail(f"sample {k}: bounded-case chain or fixed-point identity fails")
        report.metadata = {
            **config.metadata(),
            "source": source.metadata(),
            "max_size": max_size,
            "classes": partition_to_dict(classes),
            "covering_set": covering_to_dict(covering),
        }
        log("classify", f"Classes: {[len(members) for members in classes]} component(s) each", style="cyan")
    emit(report, config.output_format, config.out)
