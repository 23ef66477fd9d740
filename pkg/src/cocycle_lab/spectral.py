"""Isoperimetric and spectral diagnostics of component graphs.

All quotients use unordered edges, with multi-edges counted by
multiplicity:

    R_p(f) = sum_{ {x,y} in E } |f(x) - f(y)|^p / sum_x |f(x)|^p

so R_2 minimised over mean-zero f is the second Laplacian eigenvalue and
h(X)^2 / 2k <= lambda_1 <= 2 h(X) holds with the constants as stated for
k-regular graphs.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import eigsh

from cocycle_lab.config import DENSE_LIMIT, DESCENT, EXHAUSTIVE_CAP, EXHAUSTIVE_CHUNK, TOLERANCES
from cocycle_lab.errors import (
    CocycleLabError,
    DimensionError,
    DisconnectedGraphError,
    ExhaustiveCapError,
    ExponentError,
    GraphTooSmallError,
    NotAnOrbitError,
)
from cocycle_lab.perm_rep import ComponentGraph
from cocycle_lab.utils import format_float, make_rng, round_float


# ============================================
# Data types
# ============================================


@dataclass(frozen=True)
class CheegerResult:
    """A Cheeger ratio together with one subset attaining it."""

    value: Fraction
    subset: tuple[int, ...]
    exact: bool

    @property
    def method(self) -> str:
        return "exact" if self.exact else "sweep"


@dataclass(frozen=True)
class RayleighMinimum:
    """Best p-Rayleigh quotient found by the multi-start descent."""

    value: float
    minimizer: np.ndarray
    start_index: int
    iterations: int


@dataclass(frozen=True)
class SpectralReport:
    """Per-component spectral summary.

    cheeger and lambda1 are None for single-vertex components, where neither
    is defined.
    """

    component_id: int
    size: int
    degree: int
    regular: bool
    cheeger: Fraction | None
    cheeger_exact: bool
    lambda1: float | None
    p_constants: dict[float, float] = field(default_factory=dict)


@dataclass(frozen=True)
class CheegerBoundsReport:
    """h^2/2k <= lambda_1 <= 2h for one graph, with slacks."""

    h: Fraction
    lambda1: float
    degree: int
    regular: bool
    lower: float
    upper: float
    asserted: bool
    lower_holds: bool
    upper_holds: bool

    @property
    def holds(self) -> bool:
        return self.lower_holds and self.upper_holds


# ============================================
# Laplacian and connectivity
# ============================================


def adjacency(graph: ComponentGraph) -> scipy.sparse.csr_matrix:
    """Sparse symmetric adjacency matrix with edge multiplicities."""
    n = graph.order
    u, v = graph.edge_arrays
    data = np.ones(2 * len(u))
    rows = np.concatenate([u, v])
    cols = np.concatenate([v, u])
    return scipy.sparse.coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()


def laplacian(graph: ComponentGraph, sparse: bool = False):
    """Combinatorial Laplacian L = D - A (dense ndarray unless sparse=True)."""
    adj = adjacency(graph)
    degrees = np.asarray(adj.sum(axis=1)).ravel()
    lap = scipy.sparse.diags(degrees) - adj
    if sparse:
        return lap.tocsr()
    return lap.toarray()


def is_connected(graph: ComponentGraph) -> bool:
    if graph.order <= 1:
        return True
    count, _ = connected_components(adjacency(graph), directed=False)
    return count == 1


def _require_spectral_input(graph: ComponentGraph) -> None:
    if graph.order < 2:
        raise GraphTooSmallError(f"graph has {graph.order} vertex; need at least 2")
    if not is_connected(graph):
        raise DisconnectedGraphError("graph is disconnected")


def _low_spectrum(graph: ComponentGraph) -> tuple[np.ndarray, np.ndarray]:
    """Two smallest Laplacian eigenpairs, ascending."""
    if graph.order <= DENSE_LIMIT:
        values, vectors = np.linalg.eigh(laplacian(graph))
        return values[:2], vectors[:, :2]
    # L + 0.01 I is positive definite, so shift-invert around -0.01 is safe.
    values, vectors = eigsh(laplacian(graph, sparse=True), k=2, sigma=-1e-2, which="LM")
    order = np.argsort(values)
    return values[order], vectors[:, order]


def lambda1(graph: ComponentGraph) -> float:
    """Second-smallest eigenvalue of the combinatorial Laplacian."""
    _require_spectral_input(graph)
    values, _ = _low_spectrum(graph)
    return max(0.0, float(values[1]))


def fiedler_vector(graph: ComponentGraph) -> np.ndarray:
    _require_spectral_input(graph)
    _, vectors = _low_spectrum(graph)
    return vectors[:, 1]


# ============================================
# Edge boundary and Cheeger constants
# ============================================


def edge_boundary(graph: ComponentGraph, subset: Iterable[int]) -> int:
    """Number of edges (with multiplicity) having exactly one endpoint in subset."""
    chosen = set(int(a) for a in subset)
    stray = chosen.difference(graph.vertices)
    if stray:
        raise NotAnOrbitError(f"vertex {min(stray)} is not in the graph")
    return sum(1 for a, b in graph.edges if (a in chosen) != (b in chosen))


def _grouped_edges(graph: ComponentGraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Distinct local edges and their multiplicities."""
    u, v = graph.edge_arrays
    if len(u) == 0:
        empty = np.zeros(0, dtype=np.intp)
        return empty, empty, np.zeros(0, dtype=np.int64)
    pairs, counts = np.unique(np.stack([u, v], axis=1), axis=0, return_counts=True)
    return pairs[:, 0], pairs[:, 1], counts.astype(np.int64)


def cheeger_exact(graph: ComponentGraph, cap: int = EXHAUSTIVE_CAP) -> CheegerResult:
    """Exact h(X) = min #boundary(A)/#A over 0 < #A <= #X/2 by exhaustive search.

    The last vertex is pinned outside the enumerated mask M; M and its
    complement share one boundary, so each mask is scored with
    min(#M, n - #M), which covers every admissible subset once.
    """
    n = graph.order
    if n < 2:
        raise GraphTooSmallError(f"graph has {n} vertex; need at least 2")
    if n > cap:
        raise ExhaustiveCapError(
            f"{n} vertices exceed the exhaustive cap of {cap}; use cheeger_sweep for an upper bound"
        )
    eu, ev, mult = _grouped_edges(graph)
    free = n - 1
    total = 1 << free
    best: Fraction | None = None
    best_mask = 0
    for start in range(0, total, EXHAUSTIVE_CHUNK):
        masks = np.arange(start, min(total, start + EXHAUSTIVE_CHUNK), dtype=np.int64)
        bits = np.zeros((n, len(masks)), dtype=np.uint8)
        for k in range(free):
            bits[k] = (masks >> k) & 1
        sizes = bits[:free].sum(axis=0, dtype=np.int64)
        boundary = np.zeros(len(masks), dtype=np.int64)
        for a, b, m in zip(eu, ev, mult):
            boundary += m * (bits[a] ^ bits[b])
        denom = np.minimum(sizes, n - sizes)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(denom > 0, boundary / np.maximum(denom, 1), np.inf)
        k = int(np.argmin(ratios))
        if not np.isfinite(ratios[k]):
            continue
        candidate = Fraction(int(boundary[k]), int(denom[k]))
        if best is None or candidate < best:
            best = candidate
            best_mask = int(masks[k])
    members = [k for k in range(free) if (best_mask >> k) & 1]
    if len(members) > n - len(members):
        excluded = set(members)
        members = [k for k in range(n) if k not in excluded]
    subset = tuple(graph.vertices[k] for k in members)
    return CheegerResult(best, subset, exact=True)


def cheeger_sweep(graph: ComponentGraph) -> CheegerResult:
    """Upper bound on h(X) from sweep cuts along the sorted Fiedler vector.

    Prefixes of both the ascending and descending orders with #A <= #X/2
    are scored; every prefix is admissible, so the result is >= h(X).
    """
    fiedler = fiedler_vector(graph)
    n = graph.order
    neighbours: list[dict[int, int]] = [dict() for _ in range(n)]
    u, v = graph.edge_arrays
    for a, b in zip(u, v):
        neighbours[a][b] = neighbours[a].get(b, 0) + 1
        neighbours[b][a] = neighbours[b].get(a, 0) + 1
    degrees = [sum(nb.values()) for nb in neighbours]
    ascending = list(np.argsort(fiedler, kind="stable"))
    best: Fraction | None = None
    best_prefix: list[int] = []
    for order in (ascending, ascending[::-1]):
        inside = [False] * n
        boundary = 0
        for size, x in enumerate(order[: n // 2], start=1):
            into = sum(m for y, m in neighbours[x].items() if inside[y])
            boundary += degrees[x] - 2 * into
            inside[x] = True
            ratio = Fraction(boundary, size)
            if best is None or ratio < best:
                best = ratio
                best_prefix = list(order[:size])
    subset = tuple(sorted(graph.vertices[k] for k in best_prefix))
    return CheegerResult(best, subset, exact=False)


def cheeger(graph: ComponentGraph, cap: int = EXHAUSTIVE_CAP) -> CheegerResult:
    """Exact Cheeger constant within the cap, sweep upper bound beyond it."""
    if graph.order <= cap:
        return cheeger_exact(graph, cap=cap)
    return cheeger_sweep(graph)


# ============================================
# p-Rayleigh quotients and p-Poincare constants
# ============================================


def _check_exponent(p: float) -> float:
    p = float(p)
    if not math.isfinite(p) or p <= 1:
        raise ExponentError(f"exponent must lie in (1, inf), got {p}")
    return p


def p_rayleigh_quotient(graph: ComponentGraph, f: Sequence[float], p: float) -> float:
    """Unordered-edge p-Rayleigh quotient of f (indexed like graph.vertices)."""
    p = _check_exponent(p)
    f = np.asarray(f, dtype=float)
    if f.shape != (graph.order,):
        raise DimensionError(f"function has shape {f.shape}, graph has {graph.order} vertices")
    den = float(np.sum(np.abs(f) ** p))
    if den == 0.0:
        raise CocycleLabError("p-Rayleigh quotient of the zero function is undefined")
    u, v = graph.edge_arrays
    return float(np.sum(np.abs(f[u] - f[v]) ** p)) / den


class _RayleighObjective:
    """Quotient and mean-zero projected gradient for one graph and exponent."""

    def __init__(self, graph: ComponentGraph, p: float):
        self.n = graph.order
        self.u, self.v = graph.edge_arrays
        self.p = p

    def value(self, f: np.ndarray) -> float:
        den = np.sum(np.abs(f) ** self.p)
        return float(np.sum(np.abs(f[self.u] - f[self.v]) ** self.p) / den)

    def value_and_gradient(self, f: np.ndarray) -> tuple[float, np.ndarray]:
        p = self.p
        d = f[self.u] - f[self.v]
        num = np.sum(np.abs(d) ** p)
        den = np.sum(np.abs(f) ** p)
        quotient = num / den
        w = p * np.abs(d) ** (p - 1) * np.sign(d)
        grad_num = np.bincount(self.u, weights=w, minlength=self.n) - np.bincount(self.v, weights=w, minlength=self.n)
        grad_den = p * np.abs(f) ** (p - 1) * np.sign(f)
        grad = (grad_num - quotient * grad_den) / den
        return float(quotient), grad - grad.mean()


def _normalize(f: np.ndarray, p: float) -> np.ndarray:
    f = f - f.mean()
    norm = np.sum(np.abs(f) ** p) ** (1.0 / p)
    return f / norm if norm > 0 else f


def _descend(objective: _RayleighObjective, f: np.ndarray, max_iter: int, rel_tol: float) -> tuple[float, np.ndarray, int]:
    """Projected gradient descent with Armijo backtracking on the mean-zero hyperplane."""
    p = objective.p
    f = _normalize(f, p)
    value, grad = objective.value_and_gradient(f)
    step = DESCENT["initial_step"]
    iterations = 0
    for iterations in range(1, max_iter + 1):
        gnorm2 = float(grad @ grad)
        if gnorm2 == 0.0:
            break
        accepted = False
        for _ in range(DESCENT["max_backtracks"]):
            trial = f - step * grad
            if np.any(trial):
                trial_value = objective.value(trial)
                if trial_value <= value - DESCENT["armijo"] * step * gnorm2:
                    accepted = True
                    break
            step *= DESCENT["shrink"]
        if not accepted:
            break
        f = _normalize(trial, p)
        new_value, grad = objective.value_and_gradient(f)
        change = value - new_value
        value = new_value
        step *= 2.0
        if change <= rel_tol * max(value, 1e-300):
            break
    return value, f, iterations


def minimize_p_rayleigh(
    graph: ComponentGraph,
    p: float,
    seed: int = 0,
    starts: int | None = None,
    max_iter: int | None = None,
    rel_tol: float | None = None,
) -> RayleighMinimum:
    """Multi-start descent for min R_p(f) over nonconstant mean-zero f.

    Start 0 is the Fiedler vector; the rest are seeded Gaussian vectors.
    The best value wins, ties going to the lowest start index, so the result
    is deterministic for a fixed seed. The value is an upper bound on the
    true constant.
    """
    p = _check_exponent(p)
    _require_spectral_input(graph)
    starts = DESCENT["starts"] if starts is None else starts
    max_iter = DESCENT["max_iter"] if max_iter is None else max_iter
    rel_tol = DESCENT["rel_tol"] if rel_tol is None else rel_tol
    objective = _RayleighObjective(graph, p)
    rng = make_rng(seed)
    initial = [fiedler_vector(graph)] + [rng.standard_normal(graph.order) for _ in range(starts)]
    best: RayleighMinimum | None = None
    for index, f0 in enumerate(initial):
        if np.allclose(f0, f0.mean()):
            continue
        value, f, iterations = _descend(objective, f0, max_iter, rel_tol)
        if best is None or value < best.value:
            best = RayleighMinimum(value, f, index, iterations)
    return best


def p_poincare_constant(graph: ComponentGraph, p: float, seed: int = 0, **descent_options) -> float:
    """Numerical p-Poincare constant of a connected graph (an upper bound)."""
    return minimize_p_rayleigh(graph, p, seed=seed, **descent_options).value


# ============================================
# Cheeger-type bounds and expander families
# ============================================


def check_cheeger_bounds(graph: ComponentGraph, cap: int = EXHAUSTIVE_CAP) -> CheegerBoundsReport:
    """Compute exact h and lambda_1 and test h^2/2k <= lambda_1 <= 2h.

    The bounds are only asserted for regular graphs; for others the report
    carries the numbers with asserted=False.
    """
    lam = lambda1(graph)
    h = cheeger_exact(graph, cap=cap).value
    k = graph.degree
    regular = graph.is_regular
    lower = float(h) ** 2 / (2 * k)
    upper = 2 * float(h)
    tol = TOLERANCES["cheeger_bounds"]
    return CheegerBoundsReport(
        h=h,
        lambda1=lam,
        degree=k,
        regular=regular,
        lower=lower,
        upper=upper,
        asserted=regular,
        lower_holds=lower <= lam + tol,
        upper_holds=lam <= upper + tol,
    )


def spectral_report(
    graph: ComponentGraph,
    ps: Sequence[float] = (),
    cap: int = EXHAUSTIVE_CAP,
    seed: int = 0,
    component_id: int = 0,
    **descent_options,
) -> SpectralReport:
    """Full spectral summary of one component graph."""
    if graph.order < 2:
        return SpectralReport(component_id, graph.order, graph.degree, graph.is_regular, None, True, None, {})
    result = cheeger(graph, cap=cap)
    constants = {float(p): p_poincare_constant(graph, p, seed=seed, **descent_options) for p in ps}
    return SpectralReport(
        component_id=component_id,
        size=graph.order,
        degree=graph.degree,
        regular=graph.is_regular,
        cheeger=result.value,
        cheeger_exact=result.exact,
        lambda1=lambda1(graph),
        p_constants=constants,
    )


def cheeger_lower_bound(report: SpectralReport) -> float | None:
    """Certified lower bound on h: exact h, or lambda_1/2 when only a sweep ran."""
    if report.cheeger is None:
        return None
    if report.cheeger_exact:
        return float(report.cheeger)
    return report.lambda1 / 2


def is_expander_family(reports: Iterable[SpectralReport], threshold: float) -> bool:
    """True iff every component with at least two vertices has h > threshold."""
    for report in reports:
        bound = cheeger_lower_bound(report)
        if bound is not None and not bound > threshold:
            return False
    return True


# ============================================
# Serialization
# ============================================


def report_row(report: SpectralReport, ps: Sequence[float] = ()) -> dict[str, object]:
    """Flat row for CSV/JSON output; Cheeger printed as 'num/den' plus a float."""
    row: dict[str, object] = {
        "component": report.component_id,
        "size": report.size,
        "degree": report.degree,
        "regular": report.regular,
        "h": "" if report.cheeger is None else f"{report.cheeger.numerator}/{report.cheeger.denominator}",
        "h_float": None if report.cheeger is None else round_float(float(report.cheeger)),
        "h_method": "" if report.cheeger is None else ("exact" if report.cheeger_exact else "sweep"),
        "lambda1": round_float(report.lambda1),
    }
    for p in ps:
        row[f"c_{format_float(p)}"] = round_float(report.p_constants.get(float(p)))
    return row
