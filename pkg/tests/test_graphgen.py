"""Tests for the representation generators, the non-expander family and family specs."""

from fractions import Fraction

import pytest

from cocycle_lab.config import RNG_ALGORITHM
from cocycle_lab.errors import ArcTooLargeError, ClassSpecError, CocycleLabError, DimensionError
from cocycle_lab.graphgen import (
    DEFAULT_RATIO_BOUND,
    bounded_family,
    cycle_rep,
    family_metadata,
    margulis_rep,
    moving_pair_count,
    nonexpander_family,
    parse_family,
    random_regular_rep,
    standard_class_specs,
)
from cocycle_lab.perm_rep import UnionFind, orbit_decomposition
from cocycle_lab.spectral import cheeger, cheeger_exact, lambda1


# --- cycles, random regular and margulis ---

@pytest.mark.parametrize("n", [0, 1, 2])
def test_cycle_rep_needs_three_points(n):
    with pytest.raises(DimensionError):
        cycle_rep(n)


def test_cycle_rep_has_shift_and_inverse():
    rep = cycle_rep(5)
    assert rep.names == ["s", "s^-1"]
    assert rep["s"].targets == (1, 2, 3, 4, 0)
    assert rep["s^-1"].targets == (4, 0, 1, 2, 3)


def test_random_regular_is_deterministic_for_seed():
    assert random_regular_rep(12, 2, seed=3) == random_regular_rep(12, 2, seed=3)
    assert random_regular_rep(12, 2, seed=3) != random_regular_rep(12, 2, seed=4)


def test_random_regular_generators_move_every_point():
    rep = random_regular_rep(10, 3, seed=1)
    assert rep.names == ["p1", "p1^-1", "p2", "p2^-1", "p3", "p3^-1"]
    for name in ("p1", "p2", "p3"):
        targets = rep[name].targets
        assert all(targets[i] != i for i in range(10))
        assert any(targets[targets[i]] != i for i in range(10))


def test_random_regular_half_degree_one_splits_into_cycles():
    rep = random_regular_rep(15, 1, seed=9)
    finder = UnionFind(15)
    for i, t in enumerate(rep["p1"].targets):
        finder.merge(i, t)
    components = orbit_decomposition(rep)
    assert [comp.indices for comp in components] == finder.groups()
    assert all(comp.graph.is_regular and comp.graph.degree == 2 for comp in components)


@pytest.mark.parametrize("n, d", [(3, 1), (8, 0)])
def test_random_regular_rejects_bad_parameters(n, d):
    with pytest.raises(DimensionError):
        random_regular_rep(n, d, seed=0)


def test_moving_pair_count_small_cases():
    # 9 derangements of 4 letters, 3 of them fixed-point-free involutions
    assert moving_pair_count(4) == 3
    assert moving_pair_count(5) == 22


def test_random_regular_rejects_more_pairs_than_exist():
    with pytest.raises(DimensionError, match="has only 3"):
        random_regular_rep(4, 4, seed=0)
    rep = random_regular_rep(4, 3, seed=0)
    assert len(rep.names) == 6
    assert len({rep[name].targets for name in rep.names}) == 6


def test_random_regular_sixteen_has_pinned_cheeger_bound():
    components = orbit_decomposition(random_regular_rep(16, 2, seed=16))
    largest = max(components, key=lambda comp: comp.size)
    h = cheeger_exact(largest.graph).value
    assert h >= Fraction(1, 4)
    assert h >= lambda1(largest.graph) / 2 - 1e-9


def test_margulis_index_layout():
    rep = margulis_rep(3)
    # (x, y) = (1, 2) has index 5; a sends it to (0, 2) = 2
    assert rep["a"].targets[5] == 2
    assert rep["d"].targets[5] == 3


def test_smallest_margulis_is_connected():
    components = orbit_decomposition(margulis_rep(2))
    assert len(components) == 1
    assert components[0].size == 4


@pytest.mark.parametrize("n", range(2, 9))
def test_margulis_stays_connected_with_spectral_gap(n):
    components = orbit_decomposition(margulis_rep(n))
    assert len(components) == 1
    graph = components[0].graph
    assert graph.order == n * n
    assert lambda1(graph) > 1.2
    assert cheeger(graph).value > 0


@pytest.mark.parametrize("n", range(3, 17))
def test_cycle_rep_cheeger_closed_form(n):
    graph = orbit_decomposition(cycle_rep(n))[0].graph
    assert cheeger_exact(graph).value == Fraction(2, n // 2)


# --- non-expander family ---

def test_depth_one_family_is_a_nine_cycle_with_half_arc():
    family = nonexpander_family(1)
    piece = family.pieces[0]
    assert len(piece.indices) == 9
    assert piece.arc == (0, 1, 2, 3)
    assert piece.boundary == 2
    assert piece.ratio == Fraction(1, 2)


def test_ratio_sum_is_increasing_and_below_declared_bound():
    sums = [nonexpander_family(depth).exact_ratio_sum for depth in range(1, 17)]
    assert all(later > earlier for earlier, later in zip(sums, sums[1:]))
    assert all(value <= DEFAULT_RATIO_BOUND for value in sums)
    assert nonexpander_family(16).within_bound


def test_family_pieces_are_laid_out_consecutively():
    family = nonexpander_family(3)
    assert family.representation.size == 9 + 16 + 25
    assert family.pieces[1].indices[0] == 9
    assert family.pieces[2].arc[0] == 25
    components = orbit_decomposition(family.representation)
    assert [comp.indices for comp in components] == [piece.indices for piece in family.pieces]


def test_custom_growth_has_no_declared_bound():
    family = nonexpander_family(3, growth=lambda n: 4 * n)
    assert family.declared_bound is None
    assert family.within_bound
    assert [len(piece.indices) for piece in family.pieces] == [4, 8, 12]


@pytest.mark.parametrize("fraction", [0.0, 0.6])
def test_nonexpander_family_rejects_bad_arc_fractions(fraction):
    with pytest.raises(ArcTooLargeError):
        nonexpander_family(2, arc_fraction=fraction)


def test_zero_depth_family_is_empty():
    family = nonexpander_family(0)
    assert family.representation.size == 0
    assert family.exact_ratio_sum == 0


def test_family_metadata_records_sizes_and_ratio_sum():
    meta = family_metadata(nonexpander_family(2))
    assert meta["sizes"] == [9, 16]
    assert meta["arcs"] == [[0, 4], [9, 8]]
    assert meta["ratio_sum"] == "3/4"
    assert meta["declared_bound"] == "5/3"


# --- bounded family ---

def test_bounded_family_copies_each_class():
    rep = bounded_family(5, standard_class_specs(), 5)
    components = orbit_decomposition(rep)
    assert len(components) == 15
    assert [comp.size for comp in components[:5]] == [3] * 5
    assert [comp.size for comp in components[10:]] == [5] * 5


def test_bounded_family_without_copies_is_empty():
    rep = bounded_family(5, standard_class_specs(), 0)
    assert rep.size == 0
    assert orbit_decomposition(rep) == []


@pytest.mark.parametrize("specs", [
    [{"a": (1, 0, 2, 3)}],
    [{"a": (1, 2, 0), "b": (0, 1)}],
    [{"a": (1, 2, 3, 4, 5, 0)}],
    [{"a": (1, 2, 0)}, {"a": (2, 0, 1)}],
    [{"a": (0, 0, 1)}],
])
def test_invalid_class_specs_are_rejected(specs):
    with pytest.raises(ClassSpecError):
        bounded_family(5, specs, 1)


# --- family specs ---

def test_parse_family_variants():
    assert parse_family("cycle 8").representation.size == 8
    assert parse_family("margulis:3").representation.size == 9
    assert parse_family("bounded 2").representation.size == 2 * (3 + 3 + 5)
    nonexp = parse_family("nonexpander, 2")
    assert nonexp.nonexpander is not None
    assert nonexp.metadata()["nonexpander"]["sizes"] == [9, 16]


def test_random_regular_spec_records_seed_and_rng():
    family = parse_family("random-regular 16 2", seed=7)
    assert family.representation == random_regular_rep(16, 2, seed=7)
    meta = family.metadata()
    assert meta["seed"] == 7
    assert meta["rng"] == RNG_ALGORITHM


@pytest.mark.parametrize("text", ["", "torus 3", "cycle", "cycle x", "random-regular 16"])
def test_parse_family_rejects_malformed_specs(text):
    with pytest.raises(CocycleLabError):
        parse_family(text)
