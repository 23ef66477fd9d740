"""Deterministic generators of representations, families and test graphs.

Every generated representation uses +1 signs. Randomness goes through
utils.make_rng, so a seed pins the output bit for bit.
"""

from __future__ import annotations

import math
import re
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from cocycle_lab.classify import canonical_label
from cocycle_lab.config import MAX_LABEL_SIZE, RNG_ALGORITHM
from cocycle_lab.errors import ArcTooLargeError, ClassSpecError, CocycleLabError, DimensionError
from cocycle_lab.perm_rep import (
    ComponentGraph,
    Representation,
    SignedPermutation,
    UnionFind,
    component_graph,
    disjoint_union,
    inverse,
    symmetric_closure,
)
from cocycle_lab.spectral import edge_boundary
from cocycle_lab.utils import make_rng

ClassSpec = Mapping[str, Sequence[int]]


def _unsigned(targets: Sequence[int]) -> SignedPermutation:
    return SignedPermutation(tuple(int(t) for t in targets), (1,) * len(targets))


# ============================================
# Representations
# ============================================


def cycle_rep(n: int) -> Representation:
    """Shift s: i -> i+1 (mod n) and its inverse; the component graph is C_n."""
    if n < 3:
        raise DimensionError(f"cycle needs n >= 3, got {n}")
    shift = _unsigned([(i + 1) % n for i in range(n)])
    return symmetric_closure(n, {"s": shift})


def _random_moving_permutation(n: int, rng: np.random.Generator, taken: set) -> SignedPermutation:
    """Uniform over fixed-point-free non-involutions not already drawn (nor their inverses)."""
    while True:
        targets = rng.permutation(n)
        if np.any(targets == np.arange(n)):
            continue
        if np.array_equal(targets[targets], np.arange(n)):
            continue
        perm = _unsigned(targets.tolist())
        if perm.key() in taken or inverse(perm).key() in taken:
            continue
        taken.add(perm.key())
        return perm


def moving_pair_count(n: int) -> int:
    """Number of inverse pairs {p, p^-1} of fixed-point-free non-involutions on n letters."""
    derangements = [1, 0]
    for m in range(2, n + 1):
        derangements.append((m - 1) * (derangements[m - 1] + derangements[m - 2]))
    matchings = math.prod(range(n - 1, 0, -2)) if n % 2 == 0 else 0
    return (derangements[n] - matchings) // 2


def random_regular_rep(n: int, half_degree: int, seed: int) -> Representation:
    """d random full-support permutations p1..pd plus inverses: 2d-regular components.

    d = 1 gives disjoint cycles, one component per cycle of p1. d may not
    exceed moving_pair_count(n), or the draws could never all be distinct.
    """
    if n < 4:
        raise DimensionError(f"random regular representation needs n >= 4, got {n}")
    if half_degree < 1:
        raise DimensionError(f"half degree must be >= 1, got {half_degree}")
    # past 12 letters there are over 10^8 pairs
    if n <= 12 and half_degree > moving_pair_count(n):
        raise DimensionError(
            f"half degree {half_degree} needs that many distinct generator pairs; "
            f"n = {n} has only {moving_pair_count(n)}"
        )
    rng = make_rng(seed)
    taken: set = set()
    generators = {f"p{k + 1}": _random_moving_permutation(n, rng, taken) for k in range(half_degree)}
    return symmetric_closure(n, generators)


def margulis_rep(n: int) -> Representation:
    """The four torus maps on (Z/n)^2 with their inverses; index of (x, y) is x*n + y.

    Loops from fixed points are dropped in the component graph, so degrees
    are at most 8 but not all equal.
    """
    if n < 2:
        raise DimensionError(f"margulis construction needs n >= 2, got {n}")
    maps: dict[str, Callable[[int, int], tuple[int, int]]] = {
        "a": lambda x, y: (x + y, y),
        "b": lambda x, y: (x, x + y),
        "c": lambda x, y: (x + 1, y),
        "d": lambda x, y: (x, y + 1),
    }
    generators = {}
    for name, move in maps.items():
        targets = []
        for x in range(n):
            for y in range(n):
                tx, ty = move(x, y)
                targets.append((tx % n) * n + ty % n)
        generators[name] = _unsigned(targets)
    return symmetric_closure(n * n, generators)


# ============================================
# Non-expander family
# ============================================


def default_growth(n: int) -> int:
    return (n + 2) ** 2


# sum_{m>=3} 2/floor(m^2/2) <= sum_{m>=3} 4/(m^2-1) = 5/3
DEFAULT_RATIO_BOUND = Fraction(5, 3)


@dataclass(frozen=True)
class NonExpanderPiece:
    """One cycle component with its marked arc A_I."""

    indices: tuple[int, ...]
    arc: tuple[int, ...]
    boundary: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.boundary, len(self.arc))


@dataclass(frozen=True)
class NonExpanderFamily:
    """Disjoint cycle components C_size(n), n = 1..depth, each with a marked arc."""

    depth: int
    representation: Representation
    pieces: tuple[NonExpanderPiece, ...]
    declared_bound: Fraction | None = None

    @property
    def ratio_sum(self) -> float:
        return float(self.exact_ratio_sum)

    @property
    def exact_ratio_sum(self) -> Fraction:
        return sum((piece.ratio for piece in self.pieces), Fraction(0))

    @property
    def within_bound(self) -> bool:
        return self.declared_bound is None or self.exact_ratio_sum <= self.declared_bound


def nonexpander_family(
    depth: int,
    growth: Callable[[int], int] | None = None,
    arc_fraction: float = 0.5,
    declared_bound: Fraction | None = None,
) -> NonExpanderFamily:
    """Cycles of sizes growth(1..depth), arc = first floor(size * arc_fraction) indices.

    With the default growth (n+2)^2 and arc_fraction 1/2 the ratio sum is
    declared bounded by 5/3.
    """
    if depth < 0:
        raise DimensionError(f"depth must be >= 0, got {depth}")
    if declared_bound is None and growth is None and arc_fraction == 0.5:
        declared_bound = DEFAULT_RATIO_BOUND
    growth = growth or default_growth
    reps = []
    pieces = []
    offset = 0
    for n in range(1, depth + 1):
        size = int(growth(n))
        rep = cycle_rep(size)
        arc_length = int(math.floor(size * arc_fraction))
        if not 0 < arc_length <= size / 2:
            raise ArcTooLargeError(f"arc of {arc_length} in a cycle of {size}; need 0 < #A <= {size / 2}")
        graph = component_graph(rep, range(size))
        boundary = edge_boundary(graph, range(arc_length))
        pieces.append(NonExpanderPiece(
            indices=tuple(range(offset, offset + size)),
            arc=tuple(range(offset, offset + arc_length)),
            boundary=boundary,
        ))
        reps.append(rep)
        offset += size
    names = ["s", "s^-1"]
    representation = disjoint_union(reps, names=names) if reps else Representation(0, {}, symmetric=True)
    return NonExpanderFamily(depth, representation, tuple(pieces), declared_bound)


def family_metadata(family: NonExpanderFamily) -> dict[str, Any]:
    """JSON sidecar: sizes, arcs and the ratio sum."""
    return {
        "depth": family.depth,
        "sizes": [len(piece.indices) for piece in family.pieces],
        "arcs": [[piece.arc[0], len(piece.arc)] for piece in family.pieces],
        "boundaries": [piece.boundary for piece in family.pieces],
        "ratio_sum": f"{family.exact_ratio_sum.numerator}/{family.exact_ratio_sum.denominator}",
        "ratio_sum_float": family.ratio_sum,
        "declared_bound": None if family.declared_bound is None else str(family.declared_bound),
    }


# ============================================
# Bounded-component family
# ============================================


def _spec_representation(spec: ClassSpec, names: Sequence[str], max_size: int) -> Representation:
    sizes = {len(targets) for targets in spec.values()}
    if len(sizes) != 1:
        raise ClassSpecError(f"class spec mixes permutation sizes {sorted(sizes)}")
    size = sizes.pop()
    if size > max_size:
        raise ClassSpecError(f"class spec acts on {size} letters, more than D = {max_size}")
    generators = {}
    for name in names:
        targets = spec.get(name, range(size))
        try:
            generators[name] = _unsigned(list(targets))
        except CocycleLabError as exc:
            raise ClassSpecError(f"generator '{name}': {exc}") from exc
    finder = UnionFind(size)
    for perm in generators.values():
        for i, t in enumerate(perm.targets):
            finder.merge(i, t)
    if len(finder.groups()) != 1:
        raise ClassSpecError("class spec is not transitive on its letters")
    return Representation(size, generators)


def bounded_family(max_size: int, class_specs: Sequence[ClassSpec], copies: int) -> Representation:
    """copies copies of every class, class-major; each class is one orbit of <= max_size letters."""
    if copies < 0:
        raise DimensionError(f"copies must be >= 0, got {copies}")
    names = sorted({name for spec in class_specs for name in spec})
    blocks = [_spec_representation(spec, names, max_size) for spec in class_specs]
    seen: dict[tuple, int] = {}
    for k, block in enumerate(blocks):
        label = canonical_label(block, range(block.size), max_size)
        if label.key() in seen:
            raise ClassSpecError(f"class specs {seen[label.key()]} and {k} are equivalent")
        seen[label.key()] = k
    if copies == 0 or not blocks:
        return Representation(0, {name: _unsigned([]) for name in names})
    return disjoint_union([block for block in blocks for _ in range(copies)], names=names)


def standard_class_specs() -> list[dict[str, tuple[int, ...]]]:
    """Three pairwise inequivalent transitive classes on at most 5 letters."""
    return [
        {"a": (1, 2, 0), "b": (0, 1, 2)},
        {"a": (1, 0, 2), "b": (0, 2, 1)},
        {"a": (1, 2, 3, 4, 0), "b": (1, 0, 2, 3, 4)},
    ]


# ============================================
# Plain graphs
# ============================================


def cycle_graph(n: int) -> ComponentGraph:
    if n < 3:
        raise DimensionError(f"cycle graph needs n >= 3, got {n}")
    return ComponentGraph(tuple(range(n)), tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> ComponentGraph:
    if n < 2:
        raise DimensionError(f"path graph needs n >= 2, got {n}")
    return ComponentGraph(tuple(range(n)), tuple((i, i + 1) for i in range(n - 1)))


def complete_graph(n: int) -> ComponentGraph:
    if n < 2:
        raise DimensionError(f"complete graph needs n >= 2, got {n}")
    return ComponentGraph(tuple(range(n)), tuple((i, j) for i in range(n) for j in range(i + 1, n)))


# ============================================
# Family specs ("cycle 8", "random-regular 16 2", ...)
# ============================================


@dataclass(frozen=True)
class GeneratedFamily:
    """A representation built from a family spec, with its parameters."""

    name: str
    representation: Representation
    params: dict[str, Any] = field(default_factory=dict)
    nonexpander: NonExpanderFamily | None = None

    def metadata(self) -> dict[str, Any]:
        meta: dict[str, Any] = {"family": self.name, **self.params}
        if self.name == "random-regular":
            meta["rng"] = RNG_ALGORITHM
        if self.nonexpander is not None:
            meta["nonexpander"] = family_metadata(self.nonexpander)
        return meta


FAMILY_ARITY = {
    "cycle": 1,
    "random-regular": 2,
    "margulis": 1,
    "nonexpander": 1,
    "bounded": 1,
}


def parse_family(text: str, seed: int = 0) -> GeneratedFamily:
    """Build a family from 'NAME ARGS'; arguments may be separated by spaces, commas or colons."""
    tokens = [tok for tok in re.split(r"[\s,:]+", text.strip()) if tok]
    if not tokens:
        raise CocycleLabError("empty family spec")
    name, raw_args = tokens[0].lower(), tokens[1:]
    if name not in FAMILY_ARITY:
        raise CocycleLabError(f"unknown family '{name}'; expected one of {', '.join(FAMILY_ARITY)}")
    if len(raw_args) != FAMILY_ARITY[name]:
        raise CocycleLabError(f"family '{name}' takes {FAMILY_ARITY[name]} argument(s), got {len(raw_args)}")
    try:
        args = [int(arg) for arg in raw_args]
    except ValueError:
        raise CocycleLabError(f"family arguments must be integers, got {' '.join(raw_args)}") from None

    if name == "cycle":
        return GeneratedFamily(name, cycle_rep(args[0]), {"n": args[0]})
    if name == "random-regular":
        n, d = args
        return GeneratedFamily(name, random_regular_rep(n, d, seed), {"n": n, "half_degree": d, "seed": seed})
    if name == "margulis":
        return GeneratedFamily(name, margulis_rep(args[0]), {"n": args[0]})
    if name == "nonexpander":
        family = nonexpander_family(args[0])
        return GeneratedFamily(name, family.representation, {"depth": args[0]}, nonexpander=family)
    specs = standard_class_specs()
    return GeneratedFamily(
        name,
        bounded_family(MAX_LABEL_SIZE, specs, args[0]),
        {"copies": args[0], "classes": len(specs)},
    )
