"""Signed-permutation isometries of finite truncations of l_p.

Every linear isometry of l_p (p != 2) sends e_i to +-e_j, so a finite
truncation is a bijection of {0..n-1} plus a sign per coordinate. This module
holds that datum, its algebra (apply, compose, inverse, words) and the orbit
structure of a finitely generated representation: union-find components and
their Schreier-type component graphs.

Conventions:
    apply(pi, v)_i = signs_i * v[targets_i]
    apply(compose(a, b), v) == apply(a, apply(b, v))   ("a after b")
    a word s1 s2 ... sl acts as compose(...compose(s1, s2)..., sl)
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Any

import numpy as np

from cocycle_lab.errors import (
    DimensionError,
    InvalidPermutationError,
    NotAnOrbitError,
    RepresentationFormatError,
    UnknownGeneratorError,
)
from cocycle_lab.utils import parse_json_text, read_json_file

if TYPE_CHECKING:
    from cocycle_lab.cocycle import LpVector

Letter = tuple[str, int]
Word = tuple[Letter, ...]

INVERSE_SUFFIX = "^-1"


# ============================================
# Signed permutations
# ============================================


@dataclass(frozen=True)
class SignedPermutation:
    """The Banach-Lamperti datum (targets, signs) on {0..size-1}."""

    targets: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        targets = tuple(int(t) for t in self.targets)
        signs = tuple(int(s) for s in self.signs)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "signs", signs)
        n = len(targets)
        if len(signs) != n:
            raise InvalidPermutationError(f"{n} targets but {len(signs)} signs")
        if sorted(targets) != list(range(n)):
            raise InvalidPermutationError(f"targets are not a bijection of 0..{n - 1}: {list(targets)}")
        bad = [s for s in signs if s not in (1, -1)]
        if bad:
            raise InvalidPermutationError(f"signs must be +1 or -1, got {bad[0]}")

    @property
    def size(self) -> int:
        return len(self.targets)

    @cached_property
    def target_array(self) -> np.ndarray:
        return np.asarray(self.targets, dtype=np.intp)

    @cached_property
    def sign_array(self) -> np.ndarray:
        return np.asarray(self.signs, dtype=float)

    @property
    def is_unsigned(self) -> bool:
        return all(s == 1 for s in self.signs)

    def is_identity(self) -> bool:
        return self.is_unsigned and all(t == i for i, t in enumerate(self.targets))

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Hashable identity of the group element."""
        return self.targets, self.signs


def identity(n: int) -> SignedPermutation:
    return SignedPermutation(tuple(range(n)), (1,) * n)


def from_cycles(n: int, cycles: Iterable[Sequence[int]], signs: Sequence[int] | None = None) -> SignedPermutation:
    """Build the permutation with targets[c[k]] = c[k+1] along each cycle."""
    targets = list(range(n))
    for cycle in cycles:
        cycle = list(cycle)
        for k, index in enumerate(cycle):
            targets[index] = cycle[(k + 1) % len(cycle)]
    return SignedPermutation(tuple(targets), tuple(signs) if signs is not None else (1,) * n)


def apply_array(perm: SignedPermutation, coords: np.ndarray) -> np.ndarray:
    """Raw-array form of apply."""
    coords = np.asarray(coords, dtype=float)
    if coords.shape != (perm.size,):
        raise DimensionError(f"permutation of size {perm.size} applied to vector of shape {coords.shape}")
    return perm.sign_array * coords[perm.target_array]


def apply(perm: SignedPermutation, v: LpVector) -> LpVector:
    """Apply the isometry: result_i = signs_i * v[targets_i]."""
    return v.with_coords(apply_array(perm, v.coords))


def compose(a: SignedPermutation, b: SignedPermutation) -> SignedPermutation:
    """Return a after b, so that apply(compose(a, b), v) = apply(a, apply(b, v))."""
    if a.size != b.size:
        raise DimensionError(f"cannot compose sizes {a.size} and {b.size}")
    targets = tuple(b.targets[t] for t in a.targets)
    signs = tuple(s * b.signs[t] for s, t in zip(a.signs, a.targets))
    return SignedPermutation(targets, signs)


def inverse(a: SignedPermutation) -> SignedPermutation:
    """Formal inverse: compose(a, inverse(a)) is the unsigned identity."""
    targets = [0] * a.size
    signs = [1] * a.size
    for i, (t, s) in enumerate(zip(a.targets, a.signs)):
        targets[t] = i
        signs[t] = s
    return SignedPermutation(tuple(targets), tuple(signs))


def restrict(perm: SignedPermutation, indices: Sequence[int]) -> dict[int, int]:
    """Target map of perm restricted to an invariant index set."""
    index_set = set(indices)
    restricted = {i: perm.targets[i] for i in indices}
    escaped = [i for i, t in restricted.items() if t not in index_set]
    if escaped:
        raise NotAnOrbitError(f"index set is not invariant: {escaped[0]} leaves it")
    return restricted


# ============================================
# Representations
# ============================================


@dataclass(frozen=True)
class Representation:
    """A named generating set of signed permutations on {0..size-1}.

    Generators keep their insertion order; name order (sorted) is used
    wherever a canonical order is needed. Treat the mapping as immutable.
    """

    size: int
    generators: dict[str, SignedPermutation] = field(default_factory=dict)
    symmetric: bool = False

    def __post_init__(self) -> None:
        if self.size < 0:
            raise DimensionError(f"representation size must be >= 0, got {self.size}")
        object.__setattr__(self, "generators", dict(self.generators))
        for name, perm in self.generators.items():
            if perm.size != self.size:
                raise DimensionError(f"generator '{name}' has size {perm.size}, representation has {self.size}")
        if self.symmetric:
            keys = {perm.key() for perm in self.generators.values()}
            for name, perm in self.generators.items():
                if inverse(perm).key() not in keys:
                    raise InvalidPermutationError(
                        f"representation flagged symmetric but '{name}' has no inverse generator"
                    )

    @property
    def names(self) -> list[str]:
        return sorted(self.generators)

    def __getitem__(self, name: str) -> SignedPermutation:
        try:
            return self.generators[name]
        except KeyError:
            raise UnknownGeneratorError(f"unknown generator '{name}'") from None

    @property
    def is_unsigned(self) -> bool:
        return all(perm.is_unsigned for perm in self.generators.values())


def symmetric_closure(
    size: int, generators: Mapping[str, SignedPermutation],
) -> Representation:
    """Add `name^-1` for every generator whose inverse is not already present."""
    closed = dict(generators)
    keys = {perm.key() for perm in closed.values()}
    for name in list(generators):
        inv = inverse(generators[name])
        if inv.key() not in keys:
            closed[f"{name}{INVERSE_SUFFIX}"] = inv
            keys.add(inv.key())
    return Representation(size, closed, symmetric=True)


def unsigned(rep: Representation) -> Representation:
    """Same permutation action with every sign +1."""
    generators = {
        name: SignedPermutation(perm.targets, (1,) * perm.size)
        for name, perm in rep.generators.items()
    }
    return Representation(rep.size, generators, symmetric=rep.symmetric)


def disjoint_union(reps: Sequence[Representation], names: Sequence[str] | None = None) -> Representation:
    """Block-diagonal union; generators missing from a block act as the identity there."""
    if names is None:
        names = sorted({name for rep in reps for name in rep.generators})
    total = sum(rep.size for rep in reps)
    targets: dict[str, list[int]] = {name: [] for name in names}
    signs: dict[str, list[int]] = {name: [] for name in names}
    offset = 0
    for rep in reps:
        for name in names:
            perm = rep.generators.get(name) or identity(rep.size)
            targets[name].extend(t + offset for t in perm.targets)
            signs[name].extend(perm.signs)
        offset += rep.size
    generators = {name: SignedPermutation(tuple(targets[name]), tuple(signs[name])) for name in names}
    symmetric = all(rep.symmetric for rep in reps) if reps else False
    return Representation(total, generators, symmetric=symmetric)


# ============================================
# Words
# ============================================


def parse_word(text: str) -> Word:
    """Parse 'a*b^-1*a' (or whitespace separated letters) into a word.

    Pure function: 'e', '1' and the empty string denote the empty word.
    """
    tokens = [tok for tok in text.replace("*", " ").split() if tok]
    word: list[Letter] = []
    for tok in tokens:
        if tok in ("e", "1"):
            continue
        if tok.endswith(INVERSE_SUFFIX) and len(tok) > len(INVERSE_SUFFIX):
            word.append((tok[: -len(INVERSE_SUFFIX)], -1))
        else:
            word.append((tok, 1))
    return tuple(word)


def format_word(word: Word) -> str:
    """Inverse of parse_word; the empty word prints as 'e'."""
    if not word:
        return "e"
    return "*".join(name if exp == 1 else f"{name}{INVERSE_SUFFIX}" for name, exp in word)


def letter_permutation(rep: Representation, letter: Letter) -> SignedPermutation:
    name, exponent = letter
    perm = rep[name]
    if exponent == 1:
        return perm
    if exponent == -1:
        return inverse(perm)
    raise UnknownGeneratorError(f"letter exponent must be +1 or -1, got {exponent}")


def evaluate_word(rep: Representation, word: Sequence[Letter]) -> SignedPermutation:
    """Left-to-right composition of the letters; the empty word is the identity."""
    acc = identity(rep.size)
    for letter in word:
        acc = compose(acc, letter_permutation(rep, letter))
    return acc


def letters(rep: Representation) -> list[Letter]:
    """All letters: every generator with exponent +1, then with exponent -1."""
    return [(name, 1) for name in rep.names] + [(name, -1) for name in rep.names]


def random_word(rep: Representation, length: int, rng: np.random.Generator) -> Word:
    alphabet = letters(rep)
    if not alphabet or length <= 0:
        return ()
    picks = rng.integers(0, len(alphabet), size=length)
    return tuple(alphabet[int(k)] for k in picks)


# ============================================
# Orbits and component graphs
# ============================================


class UnionFind:
    """Disjoint sets over 0..length-1 with path compression and union by size."""

    def __init__(self, length: int):
        self.parents: list[int | None] = [None] * length
        self.block_sizes = [1] * length

    def find(self, i: int) -> int:
        root = i
        while self.parents[root] is not None:
            root = self.parents[root]
        while i != root:
            nxt = self.parents[i]
            self.parents[i] = root
            i = nxt
        return root

    def merge(self, i: int, j: int) -> None:
        i, j = self.find(i), self.find(j)
        if i == j:
            return
        if self.block_sizes[i] < self.block_sizes[j]:
            i, j = j, i
        self.parents[j] = i
        self.block_sizes[i] += self.block_sizes[j]

    def groups(self) -> list[tuple[int, ...]]:
        """Blocks as sorted tuples, ordered by least element."""
        blocks: dict[int, list[int]] = {}
        for i in range(len(self.parents)):
            blocks.setdefault(self.find(i), []).append(i)
        return sorted((tuple(block) for block in blocks.values()), key=lambda b: b[0])


@dataclass(frozen=True)
class ComponentGraph:
    """Loop-free multigraph on a component; edges are sorted pairs (u < v)."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    degree: int = field(init=False)

    def __post_init__(self) -> None:
        vertices = tuple(sorted(int(v) for v in self.vertices))
        vertex_set = set(vertices)
        if len(vertex_set) != len(vertices):
            raise NotAnOrbitError("duplicate vertices in component graph")
        edges = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise NotAnOrbitError(f"loop at vertex {u}")
            if u not in vertex_set or v not in vertex_set:
                raise NotAnOrbitError(f"edge ({u}, {v}) leaves the vertex set")
            edges.append((min(u, v), max(u, v)))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", tuple(sorted(edges)))
        degrees = self.vertex_degrees()
        object.__setattr__(self, "degree", int(degrees.max()) if len(vertices) else 0)

    @property
    def order(self) -> int:
        return len(self.vertices)

    @cached_property
    def local_index(self) -> dict[int, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge endpoints as local vertex positions, one row per edge (with multiplicity)."""
        index = self.local_index
        u = np.fromiter((index[a] for a, _ in self.edges), dtype=np.intp, count=len(self.edges))
        v = np.fromiter((index[b] for _, b in self.edges), dtype=np.intp, count=len(self.edges))
        return u, v

    def vertex_degrees(self) -> np.ndarray:
        index = {v: k for k, v in enumerate(self.vertices)}
        degrees = np.zeros(len(self.vertices), dtype=np.int64)
        for a, b in self.edges:
            degrees[index[a]] += 1
            degrees[index[b]] += 1
        return degrees

    @property
    def is_regular(self) -> bool:
        degrees = self.vertex_degrees()
        return bool(len(degrees)) and bool((degrees == degrees[0]).all())


@dataclass(frozen=True)
class Component:
    """One orbit of the underlying permutation action with its graph."""

    indices: tuple[int, ...]
    graph: ComponentGraph

    @property
    def size(self) -> int:
        return len(self.indices)


def _swaps_only(perm: SignedPermutation) -> bool:
    targets = perm.targets
    return all(targets[t] == i for i, t in enumerate(targets))


def _edge_generators(rep: Representation) -> list[tuple[str, bool]]:
    """Generators whose moves become edges, each flagged if its targets form an involution.

    In a symmetric representation only one member of each inverse pair is
    kept. A flagged generator keeps each of its 2-cycles once, whatever the
    symmetric flag says.
    """
    chosen: list[tuple[str, bool]] = []
    if not rep.symmetric:
        return [(name, _swaps_only(rep.generators[name])) for name in rep.names]
    seen: set[str] = set()
    for name in rep.names:
        if name in seen:
            continue
        seen.add(name)
        wanted = inverse(rep.generators[name]).key()
        if rep.generators[name].key() != wanted:
            for other in rep.names:
                if other not in seen and rep.generators[other].key() == wanted:
                    seen.add(other)
                    break
        chosen.append((name, _swaps_only(rep.generators[name])))
    return chosen


def component_graph(rep: Representation, indices: Iterable[int]) -> ComponentGraph:
    """Build the component graph of one orbit.

    One edge {a, targets_g(a)} per vertex a moved by generator g. Symmetric
    representations count each inverse pair once. An involution contributes
    one edge per 2-cycle. Multi-edges are kept.
    """
    vertices = tuple(sorted(set(int(i) for i in indices)))
    if not vertices:
        raise NotAnOrbitError("empty index set")
    if vertices[-1] >= rep.size or vertices[0] < 0:
        raise NotAnOrbitError("index set exceeds the representation size")
    vertex_set = set(vertices)
    finder = UnionFind(len(vertices))
    position = {v: k for k, v in enumerate(vertices)}
    edges: list[tuple[int, int]] = []
    for name in rep.names:
        perm = rep.generators[name]
        for a in vertices:
            b = perm.targets[a]
            if b not in vertex_set:
                raise NotAnOrbitError(f"generator '{name}' maps {a} outside the index set")
            finder.merge(position[a], position[b])
    if len(finder.groups()) != 1:
        raise NotAnOrbitError("index set is a union of several orbits")
    for name, involution in _edge_generators(rep):
        perm = rep.generators[name]
        for a in vertices:
            b = perm.targets[a]
            if b == a or (involution and b < a):
                continue
            edges.append((a, b))
    return ComponentGraph(vertices, tuple(edges))


def orbit_decomposition(rep: Representation) -> list[Component]:
    """Union-find over every generator's target map, components sorted by least index."""
    finder = UnionFind(rep.size)
    for perm in rep.generators.values():
        for i, t in enumerate(perm.targets):
            finder.merge(i, t)
    return [Component(block, component_graph(rep, block)) for block in finder.groups()]


def component_of(components: Sequence[Component], size: int) -> np.ndarray:
    """Array mapping each index to the position of its component."""
    owner = np.full(size, -1, dtype=np.intp)
    for k, comp in enumerate(components):
        owner[list(comp.indices)] = k
    return owner


# ============================================
# JSON
# ============================================


def representation_to_dict(rep: Representation) -> dict[str, Any]:
    return {
        "n": rep.size,
        "symmetric": rep.symmetric,
        "generators": [
            {"name": name, "targets": list(perm.targets), "signs": list(perm.signs)}
            for name, perm in rep.generators.items()
        ],
    }


def representation_from_dict(data: Any) -> Representation:
    """Validate and build a Representation from the JSON schema."""
    if not isinstance(data, dict):
        raise RepresentationFormatError("representation must be a JSON object")
    n = data.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise RepresentationFormatError("'n' must be a non-negative integer")
    symmetric = data.get("symmetric", False)
    if not isinstance(symmetric, bool):
        raise RepresentationFormatError("'symmetric' must be a boolean")
    raw_generators = data.get("generators", [])
    if not isinstance(raw_generators, list):
        raise RepresentationFormatError("'generators' must be a list")
    generators: dict[str, SignedPermutation] = {}
    for k, entry in enumerate(raw_generators):
        if not isinstance(entry, dict) or not isinstance(entry.get("name"), str):
            raise RepresentationFormatError(f"generator #{k} needs a string 'name'")
        name = entry["name"]
        if name in generators:
            raise RepresentationFormatError(f"duplicate generator name '{name}'")
        targets = entry.get("targets")
        signs = entry.get("signs", [1] * n)
        if not isinstance(targets, list) or not isinstance(signs, list):
            raise RepresentationFormatError(f"generator '{name}' needs 'targets' and 'signs' lists")
        try:
            generators[name] = SignedPermutation(tuple(targets), tuple(signs))
        except (InvalidPermutationError, TypeError, ValueError) as exc:
            raise RepresentationFormatError(f"generator '{name}': {exc}") from exc
    try:
        return Representation(n, generators, symmetric=symmetric)
    except (DimensionError, InvalidPermutationError) as exc:
        raise RepresentationFormatError(str(exc)) from exc


def dump_representation(rep: Representation) -> str:
    return json.dumps(representation_to_dict(rep), indent=2) + "\n"


def loads_representation(text: str, source: str = "<input>") -> Representation:
    return representation_from_dict(parse_json_text(text, source=source))


def load_representation(path: str) -> Representation:
    return representation_from_dict(read_json_file(path))
