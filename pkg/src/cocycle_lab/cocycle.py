"""Vectors in truncated l_p, the Z^1 / B^1 algebra, and the constructions
built on them.

A cocycle is stored by its values on the generators; values on words follow
from the identity c_{gh} = pi_g(c_h) + c_g, with c_{g^-1} = -pi_{g^-1}(c_g).
A coboundary is b_g = pi_g(v) - v. Deciding whether a cocycle is a
coboundary at finite truncation is a least-squares problem solved per
component; its kernel (one constant per component for unsigned actions) is
used to pick the minimal-q-norm solution.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np
import scipy.sparse
from scipy.optimize import minimize_scalar
from scipy.sparse.linalg import lsqr

from cocycle_lab.config import DENSE_LIMIT, TOLERANCES, WORD_SAMPLING
from cocycle_lab.errors import (
    ArcTooLargeError,
    CocycleLabError,
    DimensionError,
    ExponentError,
    NegativeCoordinateError,
    RepresentationFormatError,
)
from cocycle_lab.perm_rep import (
    Component,
    Representation,
    SignedPermutation,
    Word,
    apply_array,
    compose,
    evaluate_word,
    format_word,
    identity,
    inverse,
    letter_permutation,
    letters,
    orbit_decomposition,
    random_word,
    unsigned,
)
from cocycle_lab.spectral import p_poincare_constant, p_rayleigh_quotient
from cocycle_lab.utils import make_rng, round_float

if TYPE_CHECKING:
    from cocycle_lab.graphgen import NonExpanderFamily


# ============================================
# Vectors
# ============================================


def _check_exponent(p: float, allow_inf: bool = True) -> float:
    p = float(p)
    if math.isinf(p) and p > 0 and allow_inf:
        return p
    if not math.isfinite(p) or p <= 1:
        raise ExponentError(f"exponent must lie in (1, inf){' or be inf' if allow_inf else ''}, got {p}")
    return p


@dataclass(frozen=True, eq=False)
class LpVector:
    """Exponent-tagged coordinate vector. The tag is semantic only."""

    exponent: float
    coords: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponent", _check_exponent(self.exponent))
        coords = np.array(self.coords, dtype=float).reshape(-1)
        if not np.all(np.isfinite(coords)):
            raise CocycleLabError("vector coordinates must be finite")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @property
    def size(self) -> int:
        return len(self.coords)

    def with_coords(self, coords: np.ndarray) -> LpVector:
        return LpVector(self.exponent, coords)

    def retag(self, exponent: float) -> LpVector:
        """Same coordinates viewed in another l_r (the canonical inclusion)."""
        return LpVector(exponent, self.coords)

    def norm(self, p: float | None = None) -> float:
        return lp_norm(self, self.exponent if p is None else p)

    def _check_size(self, other: LpVector) -> None:
        if other.size != self.size:
            raise DimensionError(f"vector sizes differ: {self.size} and {other.size}")

    def __add__(self, other: LpVector) -> LpVector:
        self._check_size(other)
        return self.with_coords(self.coords + other.coords)

    def __sub__(self, other: LpVector) -> LpVector:
        self._check_size(other)
        return self.with_coords(self.coords - other.coords)

    def __neg__(self) -> LpVector:
        return self.with_coords(-self.coords)


def lp_power(coords: np.ndarray, p: float) -> float:
    """sum |x_i|^p (the p-th power of the p-norm) for finite p."""
    return float(np.sum(np.abs(np.asarray(coords, dtype=float)) ** p))


def lp_norm(v: LpVector, p: float | None = None) -> float:
    """(sum |v_i|^p)^(1/p), or max |v_i| when p is inf."""
    p = _check_exponent(v.exponent if p is None else p)
    if v.size == 0:
        return 0.0
    if math.isinf(p):
        return float(np.max(np.abs(v.coords)))
    return lp_power(v.coords, p) ** (1.0 / p)


# ============================================
# Cocycles
# ============================================


@dataclass(frozen=True, eq=False)
class Cocycle:
    """Generator name -> LpVector, tagged with the exponent of its target space."""

    exponent: float
    values: dict[str, LpVector] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponent", _check_exponent(self.exponent))
        object.__setattr__(self, "values", dict(self.values))
        sizes = {value.size for value in self.values.values()}
        if len(sizes) > 1:
            raise DimensionError(f"cocycle values have different sizes: {sorted(sizes)}")

    def with_exponent(self, q: float) -> Cocycle:
        """The same cocycle viewed in l_q (b^q = i(b^p))."""
        return Cocycle(q, {name: value.retag(q) for name, value in self.values.items()})

    def generator_value(self, name: str) -> np.ndarray:
        try:
            return self.values[name].coords
        except KeyError:
            raise CocycleLabError(f"cocycle has no value for generator '{name}'") from None


def _check_cocycle_size(rep: Representation, c: Cocycle) -> None:
    for name, value in c.values.items():
        if value.size != rep.size:
            raise DimensionError(f"cocycle value '{name}' has size {value.size}, representation has {rep.size}")


def coboundary_of(rep: Representation, v: LpVector, exponent: float | None = None) -> Cocycle:
    """b_g = pi_g(v) - v for every generator."""
    if v.size != rep.size:
        raise DimensionError(f"vector of size {v.size} for representation of size {rep.size}")
    tag = v.exponent if exponent is None else exponent
    return Cocycle(tag, {
        name: LpVector(tag, apply_array(perm, v.coords) - v.coords)
        for name, perm in rep.generators.items()
    })


def _letter_value(rep: Representation, c: Cocycle, letter: tuple[str, int]) -> np.ndarray:
    name, exponent = letter
    value = c.generator_value(name)
    if exponent == 1:
        return value
    return -apply_array(inverse(rep[name]), value)


def _extend(rep: Representation, c: Cocycle, perm: SignedPermutation, value: np.ndarray,
            letter: tuple[str, int]) -> tuple[SignedPermutation, np.ndarray]:
    """(pi_g, c_g) -> (pi_{gs}, c_{gs}) with c_{gs} = pi_g(c_s) + c_g."""
    step = letter_permutation(rep, letter)
    return compose(perm, step), value + apply_array(perm, _letter_value(rep, c, letter))


def cocycle_on_word(rep: Representation, c: Cocycle, word: Word) -> LpVector:
    """Value of the cocycle on a word, built letter by letter from the identity."""
    _check_cocycle_size(rep, c)
    perm = identity(rep.size)
    value = np.zeros(rep.size)
    for letter in word:
        perm, value = _extend(rep, c, perm, value, letter)
    return LpVector(c.exponent, value)


@dataclass(frozen=True)
class CocycleIdentityReport:
    """Outcome of verify_cocycle_identity."""

    max_violation: float
    words_checked: int
    failures: tuple[str, ...]
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance


def _sampled_words(rep: Representation, max_word_len: int, seed: int) -> list[Word]:
    """Exhaustive words up to length 3 plus seeded random words up to max_word_len."""
    alphabet = letters(rep)
    words: list[Word] = [()]
    exhaustive = min(max_word_len, WORD_SAMPLING["exhaustive_length"])
    for length in range(1, exhaustive + 1):
        words.extend(itertools.product(alphabet, repeat=length))
    if alphabet and max_word_len > 0:
        rng = make_rng(seed)
        for _ in range(WORD_SAMPLING["random_words"]):
            length = int(rng.integers(1, max_word_len + 1))
            words.append(random_word(rep, length, rng))
    return words


def verify_cocycle_identity(rep: Representation, c: Cocycle, max_word_len: int = 3, seed: int = 0,
                            tolerance: float | None = None) -> CocycleIdentityReport:
    """Check c_{gh} = pi_g(c_h) + c_g on sampled words and that c is a function on G.

    Every sampled word w is split at every position into g h and the
    identity is tested; additionally, words with the same permutation image
    (the empty word included) must carry the same value.
    """
    _check_cocycle_size(rep, c)
    tolerance = TOLERANCES["cocycle_identity"] if tolerance is None else tolerance
    by_image: dict[tuple, np.ndarray] = {identity(rep.size).key(): np.zeros(rep.size)}
    worst = 0.0
    failures: list[str] = []
    words = _sampled_words(rep, max_word_len, seed)
    for word in words:
        prefixes = [(identity(rep.size), np.zeros(rep.size))]
        for letter in word:
            prefixes.append(_extend(rep, c, *prefixes[-1], letter))
        perm, value = prefixes[-1]
        violation = 0.0
        for k in range(1, len(word)):
            g_perm, g_value = prefixes[k]
            h_value = cocycle_on_word(rep, c, word[k:]).coords
            split = g_value + apply_array(g_perm, h_value)
            violation = max(violation, float(np.max(np.abs(value - split), initial=0.0)))
        known = by_image.setdefault(perm.key(), value)
        violation = max(violation, float(np.max(np.abs(value - known), initial=0.0)))
        if violation > tolerance and len(failures) < 20:
            failures.append(f"{format_word(word)}: {violation:.3e}")
        worst = max(worst, violation)
    return CocycleIdentityReport(worst, len(words), tuple(failures), tolerance)


# ============================================
# Coboundary solving
# ============================================


@dataclass(frozen=True, eq=False)
class CoboundarySolution:
    """Minimal-q-norm v with pi_g(v) - v = c_g, when one exists at this truncation."""

    solution: LpVector | None
    residual: float
    per_component_shifts: dict[int, float]
    solution_qnorm: float | None
    exponent: float

    @property
    def solved(self) -> bool:
        return self.solution is not None

    @property
    def qnorm_power(self) -> float | None:
        """solution_qnorm ** q (the quantity the divergence bounds speak about)."""
        if self.solution is None:
            return None
        if math.isinf(self.exponent):
            return self.solution_qnorm
        return lp_power(self.solution.coords, self.exponent)


def _component_system(rep: Representation, c: Cocycle, indices: Sequence[int]) -> tuple[Any, np.ndarray]:
    """Rows s_{g,i} v[t_{g,i}] - v_i = c_{g,i} for i in the component, every generator."""
    position = {index: k for k, index in enumerate(indices)}
    m = len(indices)
    rows, cols, data = [], [], []
    rhs = []
    row = 0
    for name in rep.names:
        perm = rep.generators[name]
        value = c.generator_value(name)
        for i in indices:
            rows.extend((row, row))
            cols.extend((position[perm.targets[i]], position[i]))
            data.extend((float(perm.signs[i]), -1.0))
            rhs.append(value[i])
            row += 1
    matrix = scipy.sparse.coo_matrix((data, (rows, cols)), shape=(row, m)).tocsr()
    return matrix, np.asarray(rhs, dtype=float)


def _kernel_vector(rep: Representation, indices: Sequence[int]) -> np.ndarray | None:
    """Fixed vector of the signed action on one orbit (entries +-1), or None if only 0 is fixed."""
    position = {index: k for k, index in enumerate(indices)}
    kernel = np.zeros(len(indices))
    kernel[0] = 1.0
    stack = [indices[0]]
    visited = {indices[0]}
    while stack:
        i = stack.pop()
        for name in rep.names:
            perm = rep.generators[name]
            t = perm.targets[i]
            expected = perm.signs[i] * kernel[position[i]]
            if t in visited:
                if kernel[position[t]] != expected:
                    return None
                continue
            kernel[position[t]] = expected
            visited.add(t)
            stack.append(t)
    return kernel


def _minimal_shift(x: np.ndarray, kernel: np.ndarray, q: float) -> float:
    """argmin_t ||x + t*kernel||_q for a +-1 kernel (convex in t)."""
    a = x * kernel
    lo, hi = float(-a.max()), float(-a.min())
    if hi - lo <= 0.0:
        return lo
    if math.isinf(q):
        return (lo + hi) / 2
    result = minimize_scalar(
        lambda t: float(np.sum(np.abs(a + t) ** q)),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-13 * max(1.0, hi - lo)},
    )
    return float(result.x)


def solve_coboundary(rep: Representation, c: Cocycle, norm_exponent: float,
                     components: Sequence[Component] | None = None) -> CoboundarySolution:
    """Solve {pi_g(v) - v = c_g} in least squares, one component at a time.

    The least-squares solution is shifted along the component's kernel to
    minimise its q-norm; per_component_shifts records that kernel
    coordinate. The solution is returned only when the residual (l2 norm of
    the unexplained part) is at most the absolute coboundary_residual
    tolerance, whatever the size of c.
    """
    q = _check_exponent(norm_exponent)
    _check_cocycle_size(rep, c)
    if components is None:
        components = orbit_decomposition(rep)
    coords = np.zeros(rep.size)
    shifts: dict[int, float] = {}
    residual_sq = 0.0
    for k, comp in enumerate(components):
        indices = list(comp.indices)
        if not rep.generators:
            continue
        matrix, rhs = _component_system(rep, c, indices)
        if len(indices) <= DENSE_LIMIT:
            x = np.linalg.lstsq(matrix.toarray(), rhs, rcond=None)[0]
        else:
            tol = TOLERANCES["lstsq"]
            x = lsqr(matrix, rhs, atol=tol, btol=tol, iter_lim=20 * len(indices))[0]
        residual_sq += float(np.sum((matrix @ x - rhs) ** 2))
        kernel = _kernel_vector(rep, indices)
        if kernel is not None:
            t = _minimal_shift(x, kernel, q)
            x = x + t * kernel
            shifts[k] = t
        coords[indices] = x
    residual = math.sqrt(residual_sq)
    if residual > TOLERANCES["coboundary_residual"]:
        return CoboundarySolution(None, residual, shifts, None, q)
    solution = LpVector(q, coords)
    return CoboundarySolution(solution, residual, shifts, lp_norm(solution, q), q)


# ============================================
# Displacement and orbit centering
# ============================================


def displacement(rep: Representation, v: LpVector, p: float) -> float:
    """sum over generators of ||pi_g(v) - v||_p^p."""
    p = _check_exponent(p, allow_inf=False)
    if v.size != rep.size:
        raise DimensionError(f"vector of size {v.size} for representation of size {rep.size}")
    return sum(lp_power(apply_array(perm, v.coords) - v.coords, p) for perm in rep.generators.values())


def orbit_center(v: LpVector, components: Sequence[Component],
                 exclude: Sequence[bool] | None = None) -> LpVector:
    """Subtract each component's mean; excluded components (the J set) are zeroed."""
    coords = np.array(v.coords)
    for k, comp in enumerate(components):
        indices = list(comp.indices)
        if exclude is not None and exclude[k]:
            coords[indices] = 0.0
        else:
            coords[indices] -= coords[indices].mean()
    return v.with_coords(coords)


@dataclass(frozen=True)
class ExpanderCaseReport:
    """displacement(v_hat) >= c_min * ||v_hat||_p^p, with per-component detail."""

    displacement: float
    centered_power: float
    c_min: float
    constants: dict[int, float]
    quotients: dict[int, float]
    tolerance: float

    @property
    def rhs(self) -> float:
        return self.c_min * self.centered_power

    @property
    def holds(self) -> bool:
        return self.displacement >= self.rhs * (1 - self.tolerance)


def expander_case_check(rep: Representation, v: LpVector, p: float, seed: int = 0,
                        constants: Mapping[int, float] | None = None,
                        **descent_options) -> ExpanderCaseReport:
    """Centre v per component and test the Poincare-type displacement bound.

    Constants default to the computed p-Poincare value of each component
    graph with at least two vertices.
    """
    p = _check_exponent(p, allow_inf=False)
    components = orbit_decomposition(rep)
    centered = orbit_center(v, components)
    per_component: dict[int, float] = {}
    quotients: dict[int, float] = {}
    for k, comp in enumerate(components):
        if comp.size < 2:
            continue
        if constants is not None and k in constants:
            per_component[k] = float(constants[k])
        else:
            per_component[k] = p_poincare_constant(comp.graph, p, seed=seed, **descent_options)
        local = centered.coords[list(comp.indices)]
        if np.any(local):
            quotients[k] = p_rayleigh_quotient(comp.graph, local, p)
    c_min = min(per_component.values()) if per_component else 0.0
    return ExpanderCaseReport(
        displacement=displacement(rep, centered, p),
        centered_power=lp_power(centered.coords, p),
        c_min=c_min,
        constants=per_component,
        quotients=quotients,
        tolerance=TOLERANCES["chain"],
    )


# ============================================
# Non-expander construction
# ============================================


@dataclass(frozen=True, eq=False)
class NonExpanderCocycle:
    """The l_inf vector on the marked arcs, its cocycle, and per-generator bounds."""

    vector: LpVector
    cocycle: Cocycle
    norms: dict[str, float]
    bound: float

    @property
    def holds(self) -> bool:
        return all(value <= self.bound * (1 + TOLERANCES["chain"]) for value in self.norms.values())


def nonexpander_cocycle(family: NonExpanderFamily, q: float) -> NonExpanderCocycle:
    """v_i = (1/#A_I)^(1/q) on each marked arc A_I, 0 elsewhere; b_g = pi_g(v) - v.

    Each generator satisfies ||b_g||_q^q <= 2 * sum_I #boundary(A_I)/#A_I.
    """
    q = _check_exponent(q, allow_inf=False)
    rep = family.representation
    coords = np.zeros(rep.size)
    for piece in family.pieces:
        if not 0 < len(piece.arc) <= len(piece.indices) / 2:
            raise ArcTooLargeError(f"arc of {len(piece.arc)} in a component of {len(piece.indices)}")
        coords[list(piece.arc)] = (1.0 / len(piece.arc)) ** (1.0 / q)
    vector = LpVector(math.inf, coords)
    cocycle = coboundary_of(rep, vector, exponent=q)
    norms = {name: lp_power(value.coords, q) for name, value in cocycle.values.items()}
    return NonExpanderCocycle(vector, cocycle, norms, 2 * family.ratio_sum)


@dataclass(frozen=True)
class WordBoundReport:
    """max over sampled words of ||pi_w(v) - v||_q^q against 2 l sum_I ratio."""

    length: int
    computed: float
    bound: float
    words_checked: int
    failures: tuple[str, ...]

    @property
    def holds(self) -> bool:
        return not self.failures and self.computed <= self.bound * (1 + TOLERANCES["chain"])


def word_displacement_bound(family: NonExpanderFamily, length: int, q: float, seed: int = 0) -> WordBoundReport:
    """Check the word-length bound; each word is held to 2 * len(word) * ratio_sum."""
    built = nonexpander_cocycle(family, q)
    rep = family.representation
    v = built.vector.coords
    computed = 0.0
    failures: list[str] = []
    words = _sampled_words(rep, length, seed)
    for word in words:
        perm = evaluate_word(rep, word)
        value = lp_power(apply_array(perm, v) - v, built.cocycle.exponent)
        own_bound = 2 * len(word) * family.ratio_sum
        if value > own_bound * (1 + TOLERANCES["chain"]) + 1e-300:
            failures.append(f"{format_word(word)}: {value:.6g} > {own_bound:.6g}")
        computed = max(computed, value)
    return WordBoundReport(length, computed, 2 * length * family.ratio_sum, len(words), tuple(failures))


@dataclass(frozen=True)
class DivergenceRow:
    depth: int
    components: int
    qnorm_q: float
    lower_bound: float
    residual: float

    @property
    def holds(self) -> bool:
        return self.qnorm_q >= self.lower_bound * (1 - TOLERANCES["chain"])


@dataclass(frozen=True)
class DivergenceTable:
    q: float
    rows: tuple[DivergenceRow, ...]

    @property
    def increasing(self) -> bool:
        values = [row.qnorm_q for row in self.rows]
        return all(b > a for a, b in zip(values, values[1:]))

    @property
    def holds(self) -> bool:
        return self.increasing and all(row.holds for row in self.rows)


def divergence_diagnostic(q: float, depths: Sequence[int],
                          build: Callable[..., NonExpanderFamily] | None = None,
                          **family_options) -> DivergenceTable:
    """Minimal solution q-norm^q of the non-expander cocycle across truncation depths.

    At depth d the lower bound is 2^-q times the number of components, since
    every component contributes at least 2^-q whatever its shift.
    """
    q = _check_exponent(q, allow_inf=False)
    depths = [int(d) for d in depths]
    if build is None:
        from cocycle_lab.graphgen import nonexpander_family as build
    if any(b <= a for a, b in zip(depths, depths[1:])):
        raise CocycleLabError(f"depths must be strictly increasing, got {depths}")
    rows = []
    for depth in depths:
        family = build(depth, **family_options)
        built = nonexpander_cocycle(family, q)
        solution = solve_coboundary(family.representation, built.cocycle, q)
        qnorm_q = solution.qnorm_power if solution.solved else math.inf
        rows.append(DivergenceRow(
            depth=depth,
            components=len(family.pieces),
            qnorm_q=qnorm_q,
            lower_bound=2.0 ** (-q) * len(family.pieces),
            residual=solution.residual,
        ))
    return DivergenceTable(q, tuple(rows))


# ============================================
# Sign reduction and power-map interpolation
# ============================================


def nonneg_reduction(rep: Representation, v: LpVector) -> tuple[Representation, LpVector]:
    """Drop every sign and take |v|; displacements can only shrink."""
    return unsigned(rep), v.with_coords(np.abs(v.coords))


def reduction_displacements(rep: Representation, v: LpVector, p: float) -> dict[str, tuple[float, float]]:
    """Per generator: (||pi_g v - v||_p, ||pi'_g |v| - |v| ||_p) before and after the reduction."""
    p = _check_exponent(p, allow_inf=False)
    rep_abs, v_abs = nonneg_reduction(rep, v)
    result = {}
    for name in rep.names:
        before = lp_power(apply_array(rep[name], v.coords) - v.coords, p) ** (1.0 / p)
        after = lp_power(apply_array(rep_abs[name], v_abs.coords) - v_abs.coords, p) ** (1.0 / p)
        result[name] = (before, after)
    return result


def _check_interpolation_exponents(p: float, q: float) -> tuple[float, float]:
    p = _check_exponent(p, allow_inf=False)
    q = _check_exponent(q, allow_inf=False)
    if not p < q:
        raise ExponentError(f"need 1 < p < q < inf, got p={p}, q={q}")
    return p, q


def power_map(v: LpVector, p: float, q: float) -> LpVector:
    """w_i = v_i^(p/q), tagged with r = q^2/p."""
    p, q = _check_interpolation_exponents(p, q)
    coords = np.asarray(v.coords, dtype=float)
    if np.any(coords < 0):
        raise NegativeCoordinateError(f"power map needs a nonnegative vector; min coordinate {coords.min()}")
    alive = coords >= TOLERANCES["zero_coordinate"]
    w = np.zeros_like(coords)
    w[alive] = np.power(coords[alive], p / q)
    return LpVector(q * q / p, w)


@dataclass(frozen=True)
class PowerMapIdentities:
    """Relative residuals of ||w||_r^r = ||v||_q^q and ||w||_q^q = ||v||_p^p."""

    r_residual: float
    q_residual: float

    @property
    def holds(self) -> bool:
        tol = TOLERANCES["power_map"]
        return self.r_residual <= tol and self.q_residual <= tol


def _relative(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def power_map_identities(v: LpVector, p: float, q: float) -> PowerMapIdentities:
    w = power_map(v, p, q)
    r = q * q / p
    return PowerMapIdentities(
        r_residual=_relative(lp_power(w.coords, r), lp_power(v.coords, q)),
        q_residual=_relative(lp_power(w.coords, q), lp_power(v.coords, p)),
    )


@dataclass(frozen=True)
class InterpolationRow:
    generator: str
    left: float       # ||pi_g w - w||_q^q
    right: float      # ||pi_g v - v||_p^p
    scale: float = 1.0

    @property
    def ratio(self) -> float:
        """left / (2^q * right); 0 when both sides vanish."""
        return 0.0 if self.left == 0 else self.left / self.scaled_right

    @property
    def scaled_right(self) -> float:
        return self.scale * self.right

    @property
    def holds(self) -> bool:
        return self.left <= self.scaled_right * (1 + TOLERANCES["chain"])


def interpolation_check(rep: Representation, v: LpVector, p: float, q: float) -> list[InterpolationRow]:
    """||pi_g w - w||_q^q <= 2^q ||pi_g v - v||_p^p for w = power_map(v) and every generator."""
    p, q = _check_interpolation_exponents(p, q)
    if not rep.is_unsigned:
        raise CocycleLabError("interpolation needs an unsigned representation; apply nonneg_reduction first")
    w = power_map(v, p, q)
    rows = []
    for name in rep.names:
        perm = rep.generators[name]
        left = lp_power(apply_array(perm, w.coords) - w.coords, q)
        right = lp_power(apply_array(perm, v.coords) - v.coords, p)
        rows.append(InterpolationRow(name, left, right, scale=2.0 ** q))
    return rows


@dataclass(frozen=True, eq=False)
class FixedPointSplit:
    """w = u + z with pi_g(z) = z; zero_components flags the components where z vanishes."""

    u: LpVector
    z: LpVector
    components: tuple[Component, ...]
    zero_components: tuple[bool, ...]
    fixed_violation: float


def fixed_point_split(rep: Representation, w: LpVector, q: float) -> FixedPointSplit:
    """Solve pi_g(u) - u = pi_g(w) - w for minimal-q-norm u and set z = w - u."""
    q = _check_exponent(q)
    components = tuple(orbit_decomposition(rep))
    solution = solve_coboundary(rep, coboundary_of(rep, w, exponent=q), q, components=components)
    if not solution.solved:
        raise CocycleLabError(f"coboundary of w did not solve (residual {solution.residual:.3e})")
    u = solution.solution
    z = w.with_coords(w.coords - u.coords)
    scale = max(1.0, float(np.max(np.abs(w.coords), initial=0.0)))
    zero = tuple(
        bool(np.max(np.abs(z.coords[list(comp.indices)])) <= TOLERANCES["coboundary_residual"] * scale)
        for comp in components
    )
    violation = max(
        (float(np.max(np.abs(apply_array(perm, z.coords) - z.coords), initial=0.0)) for perm in rep.generators.values()),
        default=0.0,
    )
    return FixedPointSplit(u, z, components, zero, violation)


# ============================================
# JSON
# ============================================


def _exponent_to_json(p: float) -> float | str:
    return "inf" if math.isinf(p) else p


def _exponent_from_json(raw: Any) -> float:
    if raw in ("inf", "Infinity"):
        return math.inf
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    raise RepresentationFormatError(f"exponent must be a number or 'inf', got {raw!r}")


def vector_to_dict(v: LpVector) -> dict[str, Any]:
    return {"p": _exponent_to_json(v.exponent), "coords": [float(x) for x in v.coords]}


def vector_from_dict(data: Any, default_exponent: float = 2.0) -> LpVector:
    """Accepts {"p": .., "coords": [..]} or a bare list of numbers."""
    if isinstance(data, list):
        data = {"p": default_exponent, "coords": data}
    if not isinstance(data, dict) or not isinstance(data.get("coords"), list):
        raise RepresentationFormatError("vector must be a list or an object with a 'coords' list")
    try:
        return LpVector(_exponent_from_json(data.get("p", default_exponent)), np.asarray(data["coords"], dtype=float))
    except (TypeError, ValueError) as exc:
        raise RepresentationFormatError(f"bad vector: {exc}") from exc


def cocycle_to_dict(c: Cocycle) -> dict[str, Any]:
    return {
        "p": _exponent_to_json(c.exponent),
        "values": {name: [float(x) for x in value.coords] for name, value in c.values.items()},
    }


def cocycle_from_dict(data: Any) -> Cocycle:
    if not isinstance(data, dict) or not isinstance(data.get("values"), dict):
        raise RepresentationFormatError("cocycle must be an object with a 'values' mapping")
    p = _exponent_from_json(data.get("p", 2.0))
    try:
        values = {name: LpVector(p, np.asarray(coords, dtype=float)) for name, coords in data["values"].items()}
    except (TypeError, ValueError) as exc:
        raise RepresentationFormatError(f"bad cocycle value: {exc}") from exc
    return Cocycle(p, values)


def solution_to_dict(solution: CoboundarySolution) -> dict[str, Any]:
    return {
        "residual": round_float(solution.residual),
        "solved": solution.solved,
        "qnorm": round_float(solution.solution_qnorm),
        "qnorm_power": round_float(solution.qnorm_power),
        "shifts": {str(k): round_float(t) for k, t in sorted(solution.per_component_shifts.items())},
        "solution": None if solution.solution is None else [round_float(x) for x in solution.solution.coords],
    }
