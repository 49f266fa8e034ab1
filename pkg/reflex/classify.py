"""Reflexive polygons, weight systems and reflexive simplices."""
from __future__ import annotations

import itertools
import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from .config import CLASSIFY
from .errors import DimensionError, PreconditionError
from .lattice_core import (
    IntMatrix,
    LatticeVector,
    add,
    cokernel,
    det,
    dot,
    hnf_basis,
    int_rank,
    integer_kernel,
    lattice_coordinates,
    matmul,
    primitive,
    sub,
)
from .polytope import LatticePolytope, canonical_form, count_points, degree, dual
from .reflexive import is_reflexive

logger = logging.getLogger(__name__)


# ============================================================================
# WEIGHT SYSTEMS
# ============================================================================

@dataclass(frozen=True)
class WeightSystem:
    """Unit-fraction solution Σ 1/d_i = 1 with d_0 <= ... <= d_n."""
    d_values: Tuple[int, ...]

    @classmethod
    def from_weights(cls, weights: Sequence[int]) -> "WeightSystem":
        if len(weights) < 2 or any(w <= 0 for w in weights):
            raise PreconditionError(f"weights must be at least two positive integers, got {list(weights)}")
        total = sum(weights)
        if any(total % w for w in weights):
            raise PreconditionError(
                f"weights {list(weights)} do not define a reflexive simplex: "
                f"every weight must divide their sum {total}"
            )
        return cls(tuple(sorted(total // w for w in weights)))

    @property
    def n(self) -> int:
        return len(self.d_values) - 1

    @property
    def d(self) -> int:
        return math.lcm(*self.d_values)

    @property
    def weights(self) -> Tuple[int, ...]:
        return tuple(self.d // di for di in self.d_values)

    @property
    def group_order(self) -> int:
        return math.prod(self.d_values) // self.d ** 2

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "d_values": list(self.d_values),
            "d": self.d,
            "weights": list(self.weights),
            "group_order": self.group_order,
        }


def _unit_fractions(count: int, remaining: Fraction, lower: int) -> Iterator[Tuple[int, ...]]:
    if count == 1:
        if remaining.numerator == 1 and remaining.denominator >= lower:
            yield (remaining.denominator,)
        return
    start = max(lower, math.floor(1 / remaining) + 1)
    stop = math.floor(count / remaining)
    for d in range(start, stop + 1):
        for rest in _unit_fractions(count - 1, remaining - Fraction(1, d), d):
            yield (d,) + rest


def enumerate_weight_systems(n: int) -> List[WeightSystem]:
    """All ascending solutions of Σ_{i=0}^n 1/d_i = 1."""
    if not CLASSIFY.MIN_WEIGHT_DIM <= n <= CLASSIFY.MAX_WEIGHT_DIM:
        raise PreconditionError(
            f"weight systems are enumerated for {CLASSIFY.MIN_WEIGHT_DIM} <= n <= {CLASSIFY.MAX_WEIGHT_DIM}, got {n}"
        )
    systems = [WeightSystem(ds) for ds in _unit_fractions(n + 1, Fraction(1), 1)]
    logger.info("%d weight systems for n = %d", len(systems), n)
    return systems


def _weight_lattice(w: WeightSystem) -> Tuple[IntMatrix, List[LatticeVector]]:
    """HNF basis of M(w) and the ambient simplex vertices p_i = d_i e_i - (1, ..., 1)."""
    size = w.n + 1
    basis = integer_kernel([w.weights], size)
    vertices = [
        tuple(w.d_values[i] - 1 if j == i else -1 for j in range(size)) for i in range(size)
    ]
    return basis, vertices


def simplex_from_weights(w: WeightSystem) -> LatticePolytope:
    """Δ(w) = {Σ w_i x_i = 0, x_i >= -1} in coordinates of M(w)."""
    basis, vertices = _weight_lattice(w)
    return LatticePolytope.from_vertices([lattice_coordinates(basis, v) for v in vertices])


@dataclass(frozen=True)
class SimplexMatrixReport:
    matrix: IntMatrix
    weights: Tuple[int, ...]
    symmetric: bool
    rank: int
    off_diagonal_ok: bool
    unit_fraction_sum: Fraction

    @property
    def diagonal(self) -> Tuple[int, ...]:
        return tuple(self.matrix[i][i] for i in range(len(self.matrix)))

    @property
    def ok(self) -> bool:
        size = len(self.matrix)
        return (
            self.symmetric
            and self.rank == size - 1
            and self.off_diagonal_ok
            and self.unit_fraction_sum == 1
        )


def simplex_matrix_check(p: LatticePolytope) -> SimplexMatrixReport:
    """B(Δ) = (<p_i, l_j>) with l_j the normal of the facet opposite p_j."""
    if len(p.vertices) != p.dim + 1:
        raise PreconditionError(f"expected a simplex with {p.dim + 1} vertices, got {len(p.vertices)}")
    dual(p)
    normals = []
    for j in range(len(p.vertices)):
        facet = next(i for i, s in enumerate(p.facet_vertex_sets) if j not in s)
        normals.append(p.facets[facet][0])
    matrix = tuple(tuple(dot(v, l) for l in normals) for v in p.vertices)
    size = len(matrix)
    kernel = integer_kernel(tuple(zip(*matrix)), size)
    weights = primitive(kernel[0]) if len(kernel) == 1 else ()
    if weights and weights[0] < 0:
        weights = tuple(-x for x in weights)
    return SimplexMatrixReport(
        matrix=matrix,
        weights=weights,
        symmetric=all(matrix[i][j] == matrix[j][i] for i in range(size) for j in range(size)),
        rank=int_rank(matrix),
        off_diagonal_ok=all(matrix[i][j] == -1 for i in range(size) for j in range(size) if i != j),
        unit_fraction_sum=sum((Fraction(1, matrix[i][i] + 1) for i in range(size)), Fraction(0)),
    )


# ============================================================================
# INTERMEDIATE LATTICES
# ============================================================================

@dataclass(frozen=True)
class LatticeOrbit:
    size: int
    subgroup_order: int
    polytope: LatticePolytope


@dataclass(frozen=True)
class IntermediateLattices:
    weights: WeightSystem
    group: Tuple[int, ...]  # invariant factors of M(w)/M_B(w)
    subgroup_count: int
    orbits: Tuple[LatticeOrbit, ...]


class _QuotientGroup:
    """Z^n / L for a full-rank L given by its HNF, with box representatives."""

    def __init__(self, generators: Sequence[LatticeVector], n: int) -> None:
        self.n = n
        self.h = hnf_basis(generators)
        if len(self.h) != n:
            raise PreconditionError("vertex lattice does not have full rank")

    def reduce(self, x: Sequence[int]) -> LatticeVector:
        x = list(x)
        for i, row in enumerate(self.h):
            q = x[i] // row[i]
            if q:
                x = [a - q * b for a, b in zip(x, row)]
        return tuple(x)

    def elements(self) -> List[LatticeVector]:
        return [tuple(x) for x in itertools.product(*(range(row[i]) for i, row in enumerate(self.h)))]

    def closure(self, subgroup: frozenset, g: LatticeVector) -> frozenset:
        """The subgroup generated by ``subgroup`` and ``g``."""
        zero = tuple([0] * self.n)
        multiples = [zero]
        current = self.reduce(g)
        while current != zero:
            multiples.append(current)
            current = self.reduce(add(current, g))
        return frozenset(self.reduce(add(s, m)) for s in subgroup for m in multiples)

    def subgroups(self) -> List[frozenset]:
        zero = tuple([0] * self.n)
        found = {frozenset([zero])}
        frontier = list(found)
        elements = self.elements()
        while frontier:
            grown = []
            for s in frontier:
                for g in elements:
                    if g in s:
                        continue
                    t = self.closure(s, g)
                    if t not in found:
                        found.add(t)
                        grown.append(t)
            frontier = grown
        return sorted(found, key=lambda s: (len(s), sorted(s)))


def intermediate_lattices(w: WeightSystem) -> IntermediateLattices:
    """One reflexive simplex per S(w)-orbit of lattices M_B(w) ⊆ L ⊆ M(w)."""
    if w.n > CLASSIFY.MAX_SUBGROUP_DIM:
        raise DimensionError(
            f"subgroup enumeration is limited to n <= {CLASSIFY.MAX_SUBGROUP_DIM}, got {w.n}"
        )
    basis, ambient_vertices = _weight_lattice(w)
    local = [lattice_coordinates(basis, v) for v in ambient_vertices]
    quotient = _QuotientGroup(local, w.n)
    group = cokernel(local, w.n)
    symmetries = [
        perm for perm in itertools.permutations(range(w.n + 1))
        if all(w.weights[perm[i]] == w.weights[i] for i in range(w.n + 1))
    ]

    def orbit_key(lattice: IntMatrix) -> IntMatrix:
        ambient = matmul(lattice, basis)
        return min(hnf_basis([tuple(row[perm[i]] for i in range(w.n + 1)) for row in ambient]) for perm in symmetries)

    subgroups = quotient.subgroups()
    orbits: Dict[IntMatrix, List[Tuple[frozenset, IntMatrix]]] = {}
    for s in subgroups:
        lattice = hnf_basis(local + sorted(s))
        orbits.setdefault(orbit_key(lattice), []).append((s, lattice))

    results = []
    for key in sorted(orbits):
        s, lattice = orbits[key][0]
        vertices = [lattice_coordinates(lattice, v) for v in local]
        results.append(LatticeOrbit(len(orbits[key]), len(s), LatticePolytope.from_vertices(vertices)))
    logger.info("weights %s: %d subgroups in %d orbits", w.weights, len(subgroups), len(results))
    return IntermediateLattices(w, group, len(subgroups), tuple(results))


# ============================================================================
# REFLEXIVE POLYGONS
# ============================================================================

@dataclass(frozen=True)
class CatalogEntry:
    canonical: IntMatrix
    polytope: LatticePolytope
    l: int
    l_star: int
    d: int
    dual_index: int

    @property
    def boundary(self) -> int:
        return self.l - self.l_star

    def to_dict(self, index: int) -> Dict[str, Any]:
        return {
            "index": index,
            "canonical_form": [list(row) for row in self.canonical],
            "vertices": [list(v) for v in self.polytope.vertices],
            "l": self.l,
            "l_star": self.l_star,
            "d": self.d,
            "boundary": self.boundary,
            "dual_index": self.dual_index,
        }


@dataclass(frozen=True)
class PolygonCatalog:
    entries: Tuple[CatalogEntry, ...]
    box: int

    def __len__(self) -> int:
        return len(self.entries)

    def index_of(self, p: LatticePolytope) -> Optional[int]:
        form = canonical_form(p)
        return next((i for i, e in enumerate(self.entries) if e.canonical == form), None)


def _half(v0: LatticeVector, v: LatticeVector) -> int:
    """0 for angles in [0, π) measured from v0, 1 for [π, 2π)."""
    cross = det((v0, v))
    if cross > 0 or (cross == 0 and dot(v0, v) > 0):
        return 0
    return 1


def _edge_ok(v: LatticeVector, w: LatticeVector) -> bool:
    """Edge v -> w runs counterclockwise at lattice distance 1 from the origin."""
    step = sub(w, v)
    return det((v, w)) == math.gcd(*step) and det((v, w)) > 0


def _left_turn(a: LatticeVector, b: LatticeVector, c: LatticeVector) -> bool:
    return det((sub(b, a), sub(c, b))) > 0


def _polygon_cycles(box: int) -> Iterator[Tuple[LatticeVector, ...]]:
    """Counterclockwise vertex cycles starting at their smallest vertex."""
    points = [
        (x, y) for x in range(-box, box + 1) for y in range(-box, box + 1)
        if math.gcd(x, y) == 1
    ]
    successors = {v: [w for w in points if _edge_ok(v, w)] for v in points}

    def extend(path: List[LatticeVector]) -> Iterator[Tuple[LatticeVector, ...]]:
        start, last = path[0], path[-1]
        for w in successors[last]:
            if w == start:
                if len(path) >= 3 and _left_turn(path[-2], last, start) and _left_turn(last, start, path[1]):
                    yield tuple(path)
                continue
            if w <= start or w in path:
                continue
            if len(path) >= 2 and not _left_turn(path[-2], last, w):
                continue
            if _half(start, last) > _half(start, w):
                continue
            path.append(w)
            yield from extend(path)
            path.pop()

    for start in points:
        yield from extend([start])


def classify_polygons(box: int = CLASSIFY.SEARCH_BOX) -> PolygonCatalog:
    """Lattice-equivalence classes of reflexive polygons found in [-box, box]^2."""
    started = time.perf_counter()
    classes: Dict[IntMatrix, LatticePolytope] = {}
    candidates = 0
    for cycle in _polygon_cycles(box):
        candidates += 1
        p = LatticePolytope.from_vertices(cycle)
        form = canonical_form(p)
        if form in classes:
            continue
        reflexive, info = is_reflexive(p)
        if not reflexive:
            logger.debug("candidate %s rejected: %s", cycle, info.reason)
            continue
        classes[form] = p

    forms = sorted(classes)
    position = {form: i for i, form in enumerate(forms)}
    entries = []
    for form in forms:
        p = classes[form]
        l, l_star = count_points(p)
        dual_form = canonical_form(dual(p))
        entries.append(CatalogEntry(form, p, l, l_star, degree(p), position.get(dual_form, -1)))
    logger.info(
        "%d candidate cycles, %d classes (%.2fs)", candidates, len(entries), time.perf_counter() - started
    )
    return PolygonCatalog(tuple(entries), box)


@dataclass(frozen=True)
class TwelveRow:
    index: int
    boundary: int
    dual_boundary: int

    @property
    def ok(self) -> bool:
        return self.boundary + self.dual_boundary == 12


def check_12(catalog: PolygonCatalog) -> List[TwelveRow]:
    """k + k* = 12 for every entry and its dual."""
    rows = []
    for i, entry in enumerate(catalog.entries):
        other = catalog.entries[entry.dual_index] if entry.dual_index >= 0 else None
        dual_boundary = other.boundary if other is not None else len(dual(entry.polytope).boundary_points())
        rows.append(TwelveRow(i, entry.boundary, dual_boundary))
    return rows
