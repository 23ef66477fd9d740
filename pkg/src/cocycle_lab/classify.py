"""Bounded components: canonical labels, equivalence classes, the covering set Q
and the coboundary built from base points.

Labels ignore signs; this part of the toolkit runs after the sign reduction.
A label of component I is the breadth-first order Lambda_I from the least
index (generators tried in name order) together with, for every generator,
the conjugated permutation H_I(pi_g|_I) = Lambda_I o pi_g o Lambda_I^-1 on
{0..size-1}.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from cocycle_lab.cocycle import LpVector, lp_power
from cocycle_lab.config import COVERING_SET_CAP, MAX_LABEL_SIZE, TOLERANCES
from cocycle_lab.errors import CocycleLabError, ComponentTooLargeError, NotAnOrbitError
from cocycle_lab.perm_rep import (
    Component,
    Representation,
    SignedPermutation,
    Word,
    apply_array,
    format_word,
    orbit_decomposition,
    unsigned,
)
from cocycle_lab.spectral import SpectralReport, is_expander_family

LabelPerm = tuple[int, ...]


@dataclass(frozen=True)
class ComponentLabel:
    """Canonical labeling of one component.

    order[k] is the component index carrying label k (so Lambda_I(order[k]) = k);
    gen_perms[name][k] is the label of pi_g(order[k]).
    """

    size: int
    order: tuple[int, ...]
    gen_perms: dict[str, LabelPerm]

    @property
    def labeling(self) -> dict[int, int]:
        return {index: k for k, index in enumerate(self.order)}

    def key(self) -> tuple:
        return (self.size, tuple(sorted(self.gen_perms.items())))


def canonical_label(rep: Representation, component: Component | Iterable[int], max_size: int) -> ComponentLabel:
    """Label a component breadth-first from its least index.

    Raises ComponentTooLargeError when the component has more than
    max_size indices (max_size itself is capped at MAX_LABEL_SIZE).
    """
    if max_size > MAX_LABEL_SIZE:
        raise ComponentTooLargeError(f"label size D = {max_size} exceeds the supported maximum {MAX_LABEL_SIZE}")
    indices = component.indices if isinstance(component, Component) else tuple(sorted(set(int(i) for i in component)))
    if not indices:
        raise NotAnOrbitError("empty component")
    if len(indices) > max_size:
        raise ComponentTooLargeError(f"component of size {len(indices)} exceeds D = {max_size}")

    labels = {indices[0]: 0}
    order = [indices[0]]
    queue = deque([indices[0]])
    while queue:
        x = queue.popleft()
        for name in rep.names:
            y = rep.generators[name].targets[x]
            if y not in labels:
                labels[y] = len(order)
                order.append(y)
                queue.append(y)
    if set(order) != set(indices):
        raise NotAnOrbitError(f"indices {sorted(set(indices) - set(order))} are not reached from {indices[0]}")

    gen_perms = {
        name: tuple(labels[rep.generators[name].targets[x]] for x in order)
        for name in rep.names
    }
    # H o Lambda == Lambda o sigma, checked pointwise
    for name, h in gen_perms.items():
        targets = rep.generators[name].targets
        for x in order:
            if h[labels[x]] != labels[targets[x]]:
                raise CocycleLabError(f"labeling identity fails for '{name}' at index {x}")
    return ComponentLabel(len(order), tuple(order), gen_perms)


def label_components(rep: Representation, max_size: int,
                     components: Sequence[Component] | None = None) -> list[ComponentLabel]:
    if components is None:
        components = orbit_decomposition(rep)
    return [canonical_label(rep, comp, max_size) for comp in components]


def equivalence_classes(labels: Sequence[ComponentLabel]) -> list[list[int]]:
    """Group component positions by identical (size, gen_perms); classes in order of first appearance."""
    if labels:
        names = set(labels[0].gen_perms)
        for label in labels:
            if set(label.gen_perms) != names:
                raise CocycleLabError("labels use different generator sets")
    classes: dict[tuple, list[int]] = {}
    for k, label in enumerate(labels):
        classes.setdefault(label.key(), []).append(k)
    return list(classes.values())


# ============================================
# Covering set
# ============================================


@dataclass(frozen=True)
class CoveringElement:
    """One element of the closure: a label permutation per class and a shortest word reaching it."""

    perms: tuple[LabelPerm, ...]
    word: Word


@dataclass(frozen=True)
class CoveringSet:
    """Q as a closure subgroup of the product of the per-class symmetric groups."""

    class_labels: tuple[ComponentLabel, ...]
    elements: tuple[CoveringElement, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, perms: Sequence[LabelPerm]) -> bool:
        return tuple(perms) in {element.perms for element in self.elements}


def _step(acc: LabelPerm, h: LabelPerm) -> LabelPerm:
    # label version of compose(acc, h): targets[x] = h[acc[x]]
    return tuple(h[a] for a in acc)


def _invert(h: LabelPerm) -> LabelPerm:
    result = [0] * len(h)
    for x, t in enumerate(h):
        result[t] = x
    return tuple(result)


def covering_set(labels: Sequence[ComponentLabel], classes: Sequence[Sequence[int]] | None = None,
                 cap: int = COVERING_SET_CAP) -> CoveringSet:
    """Breadth-first closure of the per-class generator tuples.

    Each element keeps the first (hence shortest) word that reached it.
    """
    if classes is None:
        classes = equivalence_classes(labels)
    class_labels = tuple(labels[members[0]] for members in classes)
    names = sorted(class_labels[0].gen_perms) if class_labels else []
    moves: list[tuple[tuple[str, int], tuple[LabelPerm, ...]]] = []
    for name in names:
        forward = tuple(label.gen_perms[name] for label in class_labels)
        moves.append(((name, 1), forward))
    for name in names:
        backward = tuple(_invert(label.gen_perms[name]) for label in class_labels)
        moves.append(((name, -1), backward))

    start = tuple(tuple(range(label.size)) for label in class_labels)
    found: dict[tuple[LabelPerm, ...], Word] = {start: ()}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        word = found[current]
        for letter, move in moves:
            nxt = tuple(_step(acc, h) for acc, h in zip(current, move))
            if nxt in found:
                continue
            if len(found) >= cap:
                raise CocycleLabError(f"covering set exceeds {cap} elements")
            found[nxt] = word + (letter,)
            queue.append(nxt)
    elements = tuple(CoveringElement(perms, word) for perms, word in found.items())
    return CoveringSet(class_labels, elements)


def restriction_key(perm: SignedPermutation, covering: CoveringSet) -> tuple[LabelPerm, ...]:
    """Label-coordinates restriction of a permutation to each class representative."""
    result = []
    for label in covering.class_labels:
        labeling = label.labeling
        result.append(tuple(labeling[perm.targets[x]] for x in label.order))
    return tuple(result)


def _element_targets(rep: Representation, labels: Sequence[ComponentLabel], classes: Sequence[Sequence[int]],
                     element: CoveringElement) -> np.ndarray:
    """Full-size target map realizing an element of Q on every component of its class."""
    targets = np.arange(rep.size)
    for k, members in enumerate(classes):
        h = element.perms[k]
        for member in members:
            order = labels[member].order
            for a, x in enumerate(order):
                targets[x] = order[h[a]]
    return targets


# ============================================
# Bounded-case coboundary
# ============================================


@dataclass(frozen=True)
class BoundedCaseReport:
    """The chain sum_{g in Q} ||pi_g v - v||_p^p >= ||w~||_p^p and the fixed-point checks."""

    q_displacement: float
    tilde_power: float
    fixed_violation: float
    coboundary_violation: float
    tolerance: float

    @property
    def chain_holds(self) -> bool:
        return self.q_displacement >= self.tilde_power * (1 - TOLERANCES["chain"])

    @property
    def holds(self) -> bool:
        return (self.chain_holds and self.fixed_violation <= self.tolerance
                and self.coboundary_violation <= self.tolerance)


def bounded_case_coboundary(rep: Representation, v: LpVector, covering: CoveringSet, p: float,
                            labels: Sequence[ComponentLabel] | None = None,
                            classes: Sequence[Sequence[int]] | None = None,
                            max_size: int = MAX_LABEL_SIZE) -> tuple[LpVector, BoundedCaseReport]:
    """w~_i = v_i - v_{base(I)} with base(I) the least index of the component of i.

    v - w~ is constant on every component, hence fixed, and
    pi_g(v) - v = pi_g(w~) - w~ for every generator.
    """
    if v.size != rep.size:
        raise CocycleLabError(f"vector of size {v.size} for representation of size {rep.size}")
    plain = unsigned(rep)
    components = orbit_decomposition(plain)
    if labels is None:
        labels = label_components(plain, max_size, components)
    if classes is None:
        classes = equivalence_classes(labels)

    coords = np.array(v.coords)
    for comp in components:
        indices = list(comp.indices)
        coords[indices] = v.coords[indices] - v.coords[comp.indices[0]]
    tilde = v.with_coords(coords)

    q_displacement = 0.0
    for element in covering.elements:
        targets = _element_targets(plain, labels, classes, element)
        q_displacement += lp_power(v.coords[targets] - v.coords, p)

    fixed = v.coords - tilde.coords
    fixed_violation = 0.0
    coboundary_violation = 0.0
    for perm in plain.generators.values():
        fixed_violation = max(fixed_violation, float(np.max(np.abs(apply_array(perm, fixed) - fixed), initial=0.0)))
        b_v = apply_array(perm, v.coords) - v.coords
        b_tilde = apply_array(perm, tilde.coords) - tilde.coords
        coboundary_violation = max(coboundary_violation, float(np.max(np.abs(b_v - b_tilde), initial=0.0)))
    scale = max(1.0, float(np.max(np.abs(v.coords), initial=0.0)))
    report = BoundedCaseReport(
        q_displacement=q_displacement,
        tilde_power=lp_power(tilde.coords, p),
        fixed_violation=fixed_violation,
        coboundary_violation=coboundary_violation,
        tolerance=TOLERANCES["fixed_point"] * scale,
    )
    return tilde, report


def classify_regime(reports: Sequence[SpectralReport], threshold: float, max_size: int = MAX_LABEL_SIZE) -> str:
    """'bounded' when every component has at most max_size indices, else expander / non-expander.

    The expander verdict looks only at the components above max_size.
    """
    unbounded = [report for report in reports if report.size > max_size]
    if not unbounded:
        return "bounded"
    if is_expander_family(unbounded, threshold):
        return "expander"
    return "non-expander"


# ============================================
# JSON
# ============================================


def partition_to_dict(classes: Sequence[Sequence[int]]) -> dict[str, list[int]]:
    return {str(k): list(members) for k, members in enumerate(classes)}


def covering_to_dict(covering: CoveringSet) -> dict[str, Any]:
    return {
        "order": covering.order,
        "elements": [
            {"perms": [list(h) for h in element.perms], "word": format_word(element.word)}
            for element in covering.elements
        ],
    }
