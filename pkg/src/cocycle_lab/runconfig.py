"""Run configuration shared by the CLI commands, and input loading."""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from cocycle_lab.cocycle import LpVector, vector_from_dict
from cocycle_lab.config import DEFAULT_SEED, EXHAUSTIVE_CAP
from cocycle_lab.errors import CocycleLabError, ExponentError
from cocycle_lab.graphgen import GeneratedFamily, parse_family
from cocycle_lab.perm_rep import load_representation
from cocycle_lab.reports import FORMATS
from cocycle_lab.utils import make_rng, read_json_file

COMMANDS = ("analyze", "cocycle", "interpolate", "classify", "generate", "diverge")


def parse_number_list(text: str, kind: type = float) -> list:
    """Parse '1,2,4' or '1 2 4' into numbers of the given kind."""
    tokens = [tok for tok in text.replace(",", " ").split() if tok]
    try:
        return [kind(tok) for tok in tokens]
    except ValueError:
        raise CocycleLabError(f"expected a list of {kind.__name__} values, got '{text}'") from None


@dataclass
class RunConfig:
    """Flags of one CLI invocation.

    Exactly one of input_path and family selects the representation
    (generate needs family). p and q, when both given, satisfy 1 < p < q.
    """

    command: str
    input_path: str = ""
    family: str = ""
    p: float | None = None
    q: float | None = None
    seed: int = DEFAULT_SEED
    depths: list[int] = field(default_factory=list)
    max_exhaustive: int = EXHAUSTIVE_CAP
    output_format: str = "csv"
    out: str = ""

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise CocycleLabError(f"unknown command '{self.command}'")
        if self.output_format not in FORMATS:
            raise CocycleLabError(f"--format must be one of {', '.join(FORMATS)}, got '{self.output_format}'")
        if self.input_path and self.family:
            raise CocycleLabError("give either --input or --family, not both")
        for name in ("p", "q"):
            value = getattr(self, name)
            if value is not None and (not math.isfinite(value) or value <= 1):
                raise ExponentError(f"--{name} must lie in (1, inf), got {value}")
        if self.p is not None and self.q is not None and not self.p < self.q:
            raise ExponentError(f"need 1 < p < q, got p={self.p}, q={self.q}")
        if not 0 <= self.seed < 2**64:
            raise CocycleLabError(f"--seed must be a 64-bit unsigned integer, got {self.seed}")

    def load(self) -> GeneratedFamily:
        """The representation named by --input or --family."""
        if self.input_path:
            rep = load_representation(self.input_path)
            return GeneratedFamily("input", rep, {"input": self.input_path})
        if self.family:
            return parse_family(self.family, seed=self.seed)
        raise CocycleLabError("no representation given; use --input FILE or --family 'NAME ARGS'")

    def metadata(self) -> dict[str, Any]:
        meta: dict[str, Any] = {"command": self.command, "seed": self.seed}
        if self.p is not None:
            meta["p"] = self.p
        if self.q is not None:
            meta["q"] = self.q
        if self.depths:
            meta["depths"] = list(self.depths)
        return meta


def load_vector(path: str, size: int, exponent: float) -> LpVector:
    vector = vector_from_dict(read_json_file(path), default_exponent=exponent)
    if vector.size != size:
        raise CocycleLabError(f"vector in {path} has size {vector.size}, representation has {size}")
    return vector


def random_vectors(size: int, exponent: float, seed: int, count: int,
                   nonnegative: bool = False) -> Sequence[LpVector]:
    """count standard normal vectors (absolute values when nonnegative) from one seeded stream."""
    rng = make_rng(seed)
    vectors = []
    for _ in range(count):
        coords = rng.standard_normal(size)
        vectors.append(LpVector(exponent, np.abs(coords) if nonnegative else coords))
    return vectors
