"""Integral polytopes: exact hull, face lattice, duality and normal forms.

A ``LatticePolytope`` carries both representations. Vertices are sorted
lexicographically; facets are pairs (primitive inner normal, offset) meaning
``<x, normal> >= -offset`` and are sorted by normal. Faces are computed once
per polytope and cached.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import ppl

from .errors import (
    NotFullDimensionalError,
    NotReflexiveError,
    OriginNotInteriorError,
    PointNotInPolytopeError,
    PreconditionError,
)
from .lattice_core import (
    Facet,
    IntMatrix,
    LatticeVector,
    affine_rank,
    dot,
    hnf,
    lattice_coordinates,
    lattice_points_in,
    linear_form,
    primitive,
    saturation,
    sub,
)

logger = logging.getLogger(__name__)

TightSet = FrozenSet[int]


@dataclass(frozen=True)
class Face:
    """A face of a lattice polytope together with its affine lattice basis."""
    owner: "LatticePolytope" = field(compare=False, repr=False)
    index: int
    dim: int
    vertex_indices: Tuple[int, ...]
    facet_indices: Tuple[int, ...]
    origin: LatticeVector
    basis: IntMatrix

    @property
    def vertices(self) -> Tuple[LatticeVector, ...]:
        return tuple(self.owner.vertices[i] for i in self.vertex_indices)

    @property
    def codim(self) -> int:
        return self.owner.dim - self.dim

    @property
    def label(self) -> str:
        return f"{self.dim}:{self.index}"

    def points(self) -> List[LatticeVector]:
        """Lattice points of the owner lying on this face."""
        tight = set(self.facet_indices)
        return [x for x, t in self.owner.points_with_facets if tight <= t]

    def interior_points(self) -> List[LatticeVector]:
        """Lattice points in the relative interior."""
        tight = frozenset(self.facet_indices)
        return [x for x, t in self.owner.points_with_facets if t == tight]

    def local_vertices(self) -> List[LatticeVector]:
        """Vertices in coordinates of the face's own lattice Z^dim."""
        return [lattice_coordinates(self.basis, sub(v, self.origin)) for v in self.vertices]


class LatticePolytope:
    """Full-dimensional lattice polytope with vertex and facet representations."""

    def __init__(self, vertices: Sequence[LatticeVector], facets: Sequence[Facet]) -> None:
        self.vertices: Tuple[LatticeVector, ...] = tuple(sorted(tuple(v) for v in vertices))
        self.facets: Tuple[Facet, ...] = tuple(sorted((tuple(n), int(c)) for n, c in facets))
        self.dim: int = len(self.vertices[0])

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_vertices(cls, points: Sequence[Sequence[int]]) -> "LatticePolytope":
        """Exact convex hull of ``points`` (duplicates and interior points dropped)."""
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise PreconditionError("cannot build a polytope from no points")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise PreconditionError("points have mixed dimensions")
        span = affine_rank(pts)
        if span < n:
            raise NotFullDimensionalError(span, n)
        started = time.perf_counter()
        vertices, facets = _hull(pts, n)
        logger.debug(
            "hull of %d points in dim %d: %d vertices, %d facets (%.3fs)",
            len(pts), n, len(vertices), len(facets), time.perf_counter() - started,
        )
        return cls(vertices, facets)

    def transform(self, u: Sequence[Sequence[int]]) -> "LatticePolytope":
        """Image under x -> u x."""
        image = [tuple(dot(row, v) for row in u) for v in self.vertices]
        return LatticePolytope.from_vertices(image)

    # ------------------------------------------------------------------
    # Basic data
    # ------------------------------------------------------------------

    @property
    def normals(self) -> Tuple[LatticeVector, ...]:
        return tuple(nrm for nrm, _ in self.facets)

    @property
    def offsets(self) -> Tuple[int, ...]:
        return tuple(off for _, off in self.facets)

    def facet_offsets(self) -> Tuple[int, ...]:
        """Offsets of all facets; reflexive iff every entry equals 1."""
        return self.offsets

    def has_interior_origin(self) -> bool:
        return all(off > 0 for off in self.offsets)

    def contains(self, m: Sequence[int]) -> bool:
        return all(dot(m, nrm) + off >= 0 for nrm, off in self.facets)

    def tight_facets(self, m: Sequence[int]) -> TightSet:
        return frozenset(j for j, (nrm, off) in enumerate(self.facets) if dot(m, nrm) + off == 0)

    def bounding_box(self, k: int = 1) -> Tuple[Tuple[int, int], ...]:
        return tuple(
            (k * min(v[i] for v in self.vertices), k * max(v[i] for v in self.vertices))
            for i in range(self.dim)
        )

    def scaled_facets(self, k: int) -> Tuple[Facet, ...]:
        """Facets of kΔ: same normals, offsets scaled by k."""
        return tuple((nrm, k * off) for nrm, off in self.facets)

    def lattice_points_scaled(self, k: int) -> List[LatticeVector]:
        if k == 0:
            return [tuple([0] * self.dim)]
        return lattice_points_in(self.scaled_facets(k), self.bounding_box(k))

    @cached_property
    def points_with_facets(self) -> Tuple[Tuple[LatticeVector, TightSet], ...]:
        points = lattice_points_in(self.facets, self.bounding_box())
        return tuple((x, self.tight_facets(x)) for x in points)

    @property
    def lattice_points(self) -> List[LatticeVector]:
        return [x for x, _ in self.points_with_facets]

    def interior_points(self) -> List[LatticeVector]:
        return [x for x, t in self.points_with_facets if not t]

    def boundary_points(self) -> List[LatticeVector]:
        return [x for x, t in self.points_with_facets if t]

    # ------------------------------------------------------------------
    # Faces
    # ------------------------------------------------------------------

    @cached_property
    def facet_vertex_sets(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(
            frozenset(i for i, v in enumerate(self.vertices) if dot(v, nrm) + off == 0)
            for nrm, off in self.facets
        )

    @cached_property
    def face_lattice(self) -> Dict[int, Tuple[Face, ...]]:
        started = time.perf_counter()
        full = frozenset(range(len(self.vertices)))
        found = {full}
        frontier = [full]
        while frontier:
            grown = []
            for s in frontier:
                for f in self.facet_vertex_sets:
                    t = s & f
                    if t and t not in found:
                        found.add(t)
                        grown.append(t)
            frontier = grown

        by_dim: Dict[int, List[Tuple[Tuple[int, ...], Tuple[int, ...]]]] = {}
        for s in found:
            idx = tuple(sorted(s))
            if s == full:
                d = self.dim
            else:
                d = affine_rank([self.vertices[i] for i in idx])
            tight = tuple(j for j, f in enumerate(self.facet_vertex_sets) if s <= f)
            by_dim.setdefault(d, []).append((idx, tight))

        lattice: Dict[int, Tuple[Face, ...]] = {}
        for d in range(self.dim + 1):
            entries = sorted(by_dim.get(d, []))
            lattice[d] = tuple(self._make_face(i, d, idx, tight) for i, (idx, tight) in enumerate(entries))
        logger.debug(
            "face lattice: f-vector %s (%.3fs)",
            [len(lattice[d]) for d in range(self.dim)], time.perf_counter() - started,
        )
        return lattice

    def _make_face(self, index: int, d: int, idx: Tuple[int, ...], tight: Tuple[int, ...]) -> Face:
        origin = self.vertices[idx[0]]
        diffs = [sub(self.vertices[i], origin) for i in idx[1:]]
        basis = saturation(diffs, self.dim) if d > 0 else ()
        return Face(self, index, d, idx, tight, origin, basis)

    @cached_property
    def faces_by_vertices(self) -> Dict[FrozenSet[int], Face]:
        return {
            frozenset(face.vertex_indices): face
            for faces_d in self.face_lattice.values()
            for face in faces_d
        }

    def faces(self, d: int) -> Tuple[Face, ...]:
        if not 0 <= d <= self.dim:
            raise PreconditionError(f"face dimension {d} outside 0..{self.dim}")
        return self.face_lattice[d]

    def as_face(self) -> Face:
        return self.face_lattice[self.dim][0]

    def face_numbers(self) -> Tuple[int, ...]:
        """f-vector (number of faces of dims 0..n-1)."""
        return tuple(len(self.face_lattice[d]) for d in range(self.dim))

    # ------------------------------------------------------------------
    # Duality
    # ------------------------------------------------------------------

    @cached_property
    def polar(self) -> "LatticePolytope":
        for nrm, off in self.facets:
            if off <= 0:
                raise OriginNotInteriorError((nrm, off))
        for nrm, off in self.facets:
            if off != 1:
                raise NotReflexiveError(nrm, off)
        return LatticePolytope(self.normals, [(v, 1) for v in self.vertices])

    # ------------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"LatticePolytope(dim={self.dim}, vertices={[list(v) for v in self.vertices]})"


def _hull(points: List[LatticeVector], n: int) -> Tuple[List[LatticeVector], List[Facet]]:
    """Vertices and facets of conv(points) by double description."""
    poly = ppl.C_Polyhedron(n, "empty")
    for p in points:
        poly.add_generator(ppl.point(linear_form(p)))
    variables = [ppl.Variable(i) for i in range(n)]
    facets: List[Facet] = []
    for ineq in poly.minimized_constraints():
        # a.x + b >= 0; full-dimensional input has no equalities
        normal = tuple(int(ineq.coefficient(v)) for v in variables)
        g = math.gcd(*normal)
        facets.append((primitive(normal), int(ineq.inhomogeneous_term()) // g))
    vertices = []
    for gen in poly.minimized_generators():
        if int(gen.divisor()) != 1:
            raise PreconditionError("hull vertex is not a lattice point")
        vertices.append(tuple(int(gen.coefficient(v)) for v in variables))
    return sorted(vertices), sorted(facets)


# ============================================================================
# MODULE-LEVEL OPERATIONS
# ============================================================================

def from_vertices(points: Sequence[Sequence[int]]) -> LatticePolytope:
    return LatticePolytope.from_vertices(points)


def faces(p: LatticePolytope, d: int) -> Tuple[Face, ...]:
    return p.faces(d)


def count_points(obj: "LatticePolytope | Face") -> Tuple[int, int]:
    """(l, l*) for a polytope or one of its faces."""
    face = obj.as_face() if isinstance(obj, LatticePolytope) else obj
    tight = frozenset(face.facet_indices)
    total = interior = 0
    for _, t in face.owner.points_with_facets:
        if tight <= t:
            total += 1
            if t == tight:
                interior += 1
    return total, interior


def degree(obj: "LatticePolytope | Face") -> int:
    """dim! times the volume of the face relative to its own lattice.

    Undefined for vertices.
    """
    face = obj.as_face() if isinstance(obj, LatticePolytope) else obj
    if face.dim == 0:
        raise PreconditionError("degree is only defined for faces of dimension >= 1")
    l, l_star = count_points(face)
    if face.dim == 1:
        return l - 1
    if face.dim == 2:
        return l + l_star - 2
    from .ehrhart import ehrhart

    if face.dim == face.owner.dim:
        local = face.owner
    else:
        local = LatticePolytope.from_vertices(face.local_vertices())
    leading = ehrhart(local).coefficients[-1]
    return int(leading * math.factorial(face.dim))


def dual(p: LatticePolytope) -> LatticePolytope:
    """Polar dual of a reflexive polytope."""
    return p.polar


def dual_face(p: LatticePolytope, face: Face) -> Face:
    """Face of the dual cut out by the facet normals tight on ``face``."""
    if not face.facet_indices:
        raise PreconditionError("the polytope itself has no dual face")
    q = dual(p)
    position = {v: i for i, v in enumerate(q.vertices)}
    keys = frozenset(position[p.facets[j][0]] for j in face.facet_indices)
    return q.faces_by_vertices[keys]


def smallest_containing_face(p: LatticePolytope, m: Sequence[int]) -> Tuple[Face, int]:
    """The face whose relative interior contains ``m`` and its codimension."""
    m = tuple(m)
    if len(m) != p.dim or not p.contains(m):
        raise PointNotInPolytopeError(m)
    keys = frozenset(range(len(p.vertices)))
    for j in p.tight_facets(m):
        keys &= p.facet_vertex_sets[j]
    face = p.faces_by_vertices[keys]
    return face, face.codim


def canonical_form(p: LatticePolytope) -> IntMatrix:
    """Normal form of the vertex matrix under GL(n, Z) and vertex reordering.

    Columns are vertices. The result is the lexicographically smallest
    (column by column) Hermite normal form over all vertex orderings. A
    prefix of an HNF is the HNF of the prefix, so orderings are grown one
    column at a time keeping only those that reach the minimal column.
    """
    n = p.dim
    vertices = p.vertices
    # (order, h, u) with h = u * V[:, order]
    frontier: List[Tuple[Tuple[int, ...], IntMatrix, IntMatrix]] = [
        ((), tuple(() for _ in range(n)), tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))
    ]
    for _ in range(len(vertices)):
        best: Optional[Tuple[int, ...]] = None
        candidates = []
        for order, h, u in frontier:
            for i in range(len(vertices)):
                if i in order:
                    continue
                column = [dot(row, vertices[i]) for row in u]
                h_new, u_step = hnf([h[r] + (column[r],) for r in range(n)])
                last = tuple(row[-1] for row in h_new)
                if best is None or last < best:
                    best = last
                    candidates = []
                if last == best:
                    u_new = tuple(tuple(dot(row, col) for col in zip(*u)) for row in u_step)
                    candidates.append((order + (i,), h_new, u_new))
        frontier = candidates
    return frontier[0][1]
