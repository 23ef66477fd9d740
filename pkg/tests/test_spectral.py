"""Tests for Cheeger constants, Laplacian spectra and p-Poincare constants."""

import math
from fractions import Fraction

import numpy as np
import pytest

from cocycle_lab.errors import DisconnectedGraphError, ExhaustiveCapError, ExponentError, GraphTooSmallError
from cocycle_lab.graphgen import complete_graph, cycle_graph, cycle_rep, path_graph, random_regular_rep
from cocycle_lab.perm_rep import ComponentGraph, orbit_decomposition
from cocycle_lab.spectral import (
    SpectralReport,
    check_cheeger_bounds,
    cheeger,
    cheeger_exact,
    cheeger_sweep,
    edge_boundary,
    is_connected,
    is_expander_family,
    lambda1,
    laplacian,
    minimize_p_rayleigh,
    p_poincare_constant,
    p_rayleigh_quotient,
    report_row,
    spectral_report,
)

FAST_DESCENT = {"starts": 2, "max_iter": 2000}


def _suite_graphs():
    """Components of 200 seeded random regular representations (k = 2, 4, 6; n <= 16)."""
    graphs = []
    seed = 0
    while len(graphs) < 200:
        half_degree = 1 + seed % 3
        n = 4 + seed % 13
        for comp in orbit_decomposition(random_regular_rep(n, half_degree, seed)):
            if comp.size >= 2:
                graphs.append(comp.graph)
        seed += 1
    return graphs[:200]


# --- edge boundary and Laplacian ---

def test_edge_boundary_counts_multiplicity():
    graph = ComponentGraph((0, 1, 2), ((0, 1), (0, 1), (1, 2)))
    assert edge_boundary(graph, [0]) == 2
    assert edge_boundary(graph, [0, 1]) == 1
    assert edge_boundary(graph, []) == 0


def test_laplacian_rows_sum_to_zero():
    lap = laplacian(cycle_graph(6))
    assert np.allclose(lap.sum(axis=1), 0.0)
    assert np.allclose(np.diag(lap), 2.0)


def test_connectivity():
    assert is_connected(cycle_graph(5))
    assert not is_connected(ComponentGraph((0, 1, 2, 3), ((0, 1), (2, 3))))


def test_edge_boundary_equals_boundary_of_complement():
    graph = orbit_decomposition(random_regular_rep(10, 2, seed=5))[0].graph
    vertices = set(graph.vertices)
    for subset in ([graph.vertices[0]], list(graph.vertices[:3]), list(graph.vertices[::2])):
        assert edge_boundary(graph, subset) == edge_boundary(graph, sorted(vertices - set(subset)))


# --- closed forms ---

@pytest.mark.parametrize("n", range(4, 25))
def test_cycle_cheeger_closed_form(n):
    assert cheeger_exact(cycle_graph(n)).value == Fraction(2, n // 2)


def test_cycle_three_has_cheeger_two():
    assert cheeger_exact(cycle_graph(3)).value == 2


@pytest.mark.parametrize("n", [3, 4, 5, 8, 13, 24])
def test_cycle_lambda1_closed_form(n):
    assert lambda1(cycle_graph(n)) == pytest.approx(2 - 2 * math.cos(2 * math.pi / n), abs=1e-9)


@pytest.mark.parametrize("n", range(2, 9))
def test_complete_graph_lambda1_is_n(n):
    assert lambda1(complete_graph(n)) == pytest.approx(n, abs=1e-9)


def test_cycle_rep_component_matches_cycle_graph():
    graph = orbit_decomposition(cycle_rep(8))[0].graph
    assert cheeger_exact(graph).value == Fraction(1, 2)
    assert lambda1(graph) == pytest.approx(2 - math.sqrt(2), abs=1e-9)


def test_exact_cheeger_subset_attains_value():
    graph = path_graph(7)
    result = cheeger_exact(graph)
    assert 0 < len(result.subset) <= graph.order / 2
    assert Fraction(edge_boundary(graph, result.subset), len(result.subset)) == result.value


# --- Cheeger inequality suite ---

def test_cheeger_bounds_hold_on_random_regular_suite():
    graphs = _suite_graphs()
    assert len(graphs) == 200
    for graph in graphs:
        report = check_cheeger_bounds(graph)
        assert report.regular
        assert report.holds, (graph.order, graph.degree, report)


@pytest.mark.parametrize("graph", [complete_graph(n) for n in range(2, 9)] + [cycle_graph(n) for n in range(3, 25)])
def test_cheeger_bounds_hold_on_classical_graphs(graph):
    assert check_cheeger_bounds(graph).holds


def test_cheeger_bounds_are_not_asserted_on_irregular_graphs():
    report = check_cheeger_bounds(path_graph(4))
    assert not report.regular
    assert report.asserted is False
    assert report.h == Fraction(1, 2)


def test_sweep_on_small_graphs():
    assert cheeger_sweep(complete_graph(4)).value == 2
    assert cheeger_sweep(path_graph(4)).value >= Fraction(1, 2)


def test_sweep_is_an_upper_bound():
    for graph in _suite_graphs()[:40] + [path_graph(10), cycle_graph(12)]:
        assert cheeger_sweep(graph).value >= cheeger_exact(graph).value


def test_cheeger_falls_back_to_sweep_beyond_cap():
    result = cheeger(cycle_graph(30), cap=24)
    assert not result.exact
    assert result.method == "sweep"
    assert result.value >= Fraction(2, 15)


def test_exact_cheeger_refuses_large_graphs():
    with pytest.raises(ExhaustiveCapError):
        cheeger_exact(cycle_graph(25), cap=24)


def test_spectral_quantities_need_two_connected_vertices():
    with pytest.raises(GraphTooSmallError):
        lambda1(ComponentGraph((0,), ()))
    with pytest.raises(DisconnectedGraphError):
        lambda1(ComponentGraph((0, 1, 2, 3), ((0, 1), (2, 3))))


# --- p-Rayleigh quotients ---

def test_rayleigh_quotient_of_single_edge():
    assert p_rayleigh_quotient(path_graph(2), [1.0, -1.0], 2.0) == pytest.approx(2.0)
    assert p_rayleigh_quotient(path_graph(2), [1.0, -1.0], 3.0) == pytest.approx(4.0)


@pytest.mark.parametrize("scale", [-3.0, 0.25, 7.0])
def test_rayleigh_quotient_is_scale_invariant(scale):
    graph = cycle_graph(6)
    f = np.array([1.0, -2.0, 0.5, 3.0, 0.0, -1.5])
    assert p_rayleigh_quotient(graph, scale * f, 3.0) == pytest.approx(p_rayleigh_quotient(graph, f, 3.0), rel=1e-12)


def test_rayleigh_quotient_rejects_bad_exponent():
    with pytest.raises(ExponentError):
        p_rayleigh_quotient(path_graph(2), [1.0, -1.0], 1.0)


@pytest.mark.parametrize("graph", [cycle_graph(n) for n in (4, 7, 12)] + [complete_graph(n) for n in (3, 6)] + [path_graph(5)])
def test_p2_constant_matches_lambda1(graph):
    lam = lambda1(graph)
    assert abs(p_poincare_constant(graph, 2.0, **FAST_DESCENT) - lam) <= 1e-6 * max(1.0, lam)


def test_p2_constant_matches_lambda1_on_random_suite():
    for graph in _suite_graphs()[::10]:
        lam = lambda1(graph)
        assert abs(p_poincare_constant(graph, 2.0, **FAST_DESCENT) - lam) <= 1e-6 * max(1.0, lam)


@pytest.mark.parametrize("p", [1.5, 3.0, 4.0])
def test_cycle_p_constant_decreases_with_n(p):
    values = [p_poincare_constant(cycle_graph(n), p, **FAST_DESCENT) for n in (4, 8, 16, 32)]
    assert all(later < earlier for earlier, later in zip(values, values[1:])), values


def test_descent_is_deterministic_for_seed():
    graph = cycle_graph(9)
    first = minimize_p_rayleigh(graph, 3.0, seed=5, **FAST_DESCENT)
    second = minimize_p_rayleigh(graph, 3.0, seed=5, **FAST_DESCENT)
    assert first.value == second.value
    assert np.array_equal(first.minimizer, second.minimizer)


def test_descent_minimizer_is_mean_zero_and_attains_value():
    graph = cycle_graph(10)
    result = minimize_p_rayleigh(graph, 3.0, **FAST_DESCENT)
    assert abs(result.minimizer.mean()) < 1e-9
    assert p_rayleigh_quotient(graph, result.minimizer, 3.0) == pytest.approx(result.value, rel=1e-9)


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_random_four_regular_family_beats_cycles(p):
    for n in (16, 32, 64):
        components = orbit_decomposition(random_regular_rep(n, 2, seed=n))
        largest = max(components, key=lambda comp: comp.size)
        expander_value = p_poincare_constant(largest.graph, p, **FAST_DESCENT)
        cycle_value = p_poincare_constant(cycle_graph(largest.size), p, **FAST_DESCENT)
        assert expander_value > cycle_value > 0


@pytest.mark.parametrize("n, bound", [(16, 0.5), (32, 0.45), (64, 0.25), (128, 0.2)])
def test_random_four_regular_p3_constant_stays_above_pinned_bound(n, bound):
    components = orbit_decomposition(random_regular_rep(n, 2, seed=n))
    largest = max(components, key=lambda comp: comp.size)
    assert p_poincare_constant(largest.graph, 3.0) > bound


# --- reports and family verdicts ---

def test_spectral_report_for_cycle_eight():
    report = spectral_report(cycle_graph(8), ps=[2.0], **FAST_DESCENT)
    assert report.cheeger == Fraction(1, 2)
    assert report.cheeger_exact
    assert report.lambda1 == pytest.approx(0.585786437627, abs=1e-9)
    row = report_row(report, [2.0])
    assert row["h"] == "1/2"
    assert row["h_method"] == "exact"
    assert row["c_2"] == pytest.approx(0.585786437627, abs=1e-6)


def test_singleton_report_has_no_spectral_values():
    report = spectral_report(ComponentGraph((0,), ()))
    assert report.cheeger is None and report.lambda1 is None
    assert report_row(report)["h"] == ""


def test_expander_family_verdict_on_cycles():
    reports = [spectral_report(cycle_graph(n)) for n in (4, 8, 16)]
    # h = 1, 1/2, 1/4
    assert not is_expander_family(reports, 0.3)
    assert is_expander_family(reports, 0.2)


def test_expander_family_ignores_singletons_and_empty_input():
    singleton = SpectralReport(0, 1, 0, False, None, True, None)
    assert is_expander_family([singleton], 10.0)
    assert is_expander_family([], 1.0)


def test_sweep_only_reports_use_half_lambda1():
    reports = [spectral_report(cycle_graph(30), cap=24)]
    lam = 2 - 2 * math.cos(2 * math.pi / 30)
    assert is_expander_family(reports, lam / 2 - 1e-6)
    assert not is_expander_family(reports, lam / 2 + 1e-6)
