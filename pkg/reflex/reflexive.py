"""Reflexivity, mirror-pair invariants, Hodge numbers and Euler numbers.

Every formula iterates faces Θ of the input polytope and pairs them with
their dual faces Θ* in the polar polytope.
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .ehrhart import delta_vector
from .errors import ConsistencyError, DimensionError, PreconditionError
from .lattice_core import cokernel, det, snf
from .polytope import Face, LatticePolytope, count_points, degree, dual, dual_face

logger = logging.getLogger(__name__)


class GroupKind:
    """Which fundamental group ``fundamental_group`` computes."""
    PAIR = "pair"
    POLYTOPE = "polytope"


@dataclass(frozen=True)
class ReflexivePairInfo:
    is_reflexive: bool
    reason: str
    offsets: Tuple[int, ...]
    pi1_pair: Tuple[int, ...] = ()
    vertex_index: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class FaceContribution:
    """One row of the per-face table of a Hodge report."""
    face: str
    dim: int
    codim: int
    l_star: int
    dual_l_star: int
    d: Optional[int]
    dual_d: Optional[int]


@dataclass(frozen=True)
class HodgeReport:
    n: int
    reflexive: bool
    h11: int
    h_n21: int
    h_n21_affine: int
    picard_ambient: int
    euler: Optional[int] = None
    faces: Tuple[FaceContribution, ...] = field(default=())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "reflexive": self.reflexive,
            "h11": self.h11,
            "h_n21": self.h_n21,
            "h_n21_affine": self.h_n21_affine,
            "picard_ambient": self.picard_ambient,
            "euler": self.euler,
            "faces": [asdict(row) for row in self.faces],
        }


@dataclass(frozen=True)
class K3Ranks:
    rank_f: int
    rank_g: int
    bound_attained: bool  # every edge has d = 1 or d* = 1

    @property
    def total(self) -> int:
        return self.rank_f + self.rank_g


@dataclass(frozen=True)
class DegreeDecomposition:
    """d(Δ) against the offset-weighted sum of facet degrees."""
    total: int
    facet_sum: int

    @property
    def holds(self) -> bool:
        return self.total == self.facet_sum


# ============================================================================
# REFLEXIVITY
# ============================================================================

def is_reflexive(p: LatticePolytope) -> Tuple[bool, ReflexivePairInfo]:
    """Facet-offset test, cross-checked against δ-vector symmetry."""
    offsets = p.facet_offsets()
    index = math.prod(snf(p.vertices))
    if not p.has_interior_origin():
        info = ReflexivePairInfo(False, "origin is not strictly interior", offsets, (), index)
        return False, info

    by_offsets = all(off == 1 for off in offsets)
    symmetric = delta_vector(p).is_symmetric()
    if by_offsets != symmetric:
        raise ConsistencyError(
            f"facet offsets say reflexive={by_offsets} but δ-vector symmetry says {symmetric}"
        )
    if by_offsets:
        info = ReflexivePairInfo(True, "all facet offsets equal 1", offsets, cokernel(p.normals, p.dim), index)
    else:
        bad = next(off for off in offsets if off != 1)
        info = ReflexivePairInfo(False, f"facet offset {bad} ≠ 1: not reflexive", offsets, (), index)
    return by_offsets, info


# ============================================================================
# FANO POLYHEDRA
# ============================================================================

def _is_simplicial(p: LatticePolytope) -> bool:
    return all(len(face.vertex_indices) == p.dim for face in p.faces(p.dim - 1))


def is_fano_polyhedron(p: LatticePolytope) -> bool:
    """Reflexive, simplicial, and the vertices of every facet form a basis of Z^n."""
    if not is_reflexive(p)[0] or not _is_simplicial(p):
        return False
    return all(abs(det(face.vertices)) == 1 for face in p.faces(p.dim - 1))


def boundary_h_vector(p: LatticePolytope) -> Tuple[int, ...]:
    """h-vector of the boundary complex; equals ψ(Δ) when Δ is a Fano polyhedron."""
    if not _is_simplicial(p):
        raise PreconditionError("the boundary h-vector needs a simplicial polytope")
    n = p.dim
    f = (1,) + p.face_numbers()
    return tuple(
        sum((-1) ** (k - i) * math.comb(n - i, k - i) * f[i] for i in range(k + 1))
        for k in range(n + 1)
    )


def _require_hodge_dim(p: LatticePolytope) -> None:
    if p.dim < 4:
        raise DimensionError(
            f"Hodge formulas need n >= 4, got n = {p.dim}; use the K3 operations for n = 3"
        )


# ============================================================================
# HODGE NUMBERS
# ============================================================================

def _facet_interior_sum(p: LatticePolytope) -> int:
    return sum(count_points(face)[1] for face in p.faces(p.dim - 1))


def _paired_interior_sum(p: LatticePolytope, dim: int) -> int:
    total = 0
    for face in p.faces(dim):
        l_star = count_points(face)[1]
        if l_star:
            total += l_star * count_points(dual_face(p, face))[1]
    return total


def hodge_h_n21(p: LatticePolytope) -> Tuple[int, int]:
    """(h^{n-2,1}, affine value without the codim-2 correction)."""
    _require_hodge_dim(p)
    dual(p)
    n = p.dim
    affine = len(p.lattice_points) - n - 1 - _facet_interior_sum(p)
    return affine + _paired_interior_sum(p, n - 2), affine


def hodge_h11(p: LatticePolytope) -> Tuple[int, int]:
    """(h^{1,1}, Picard number l(Δ*) - n - 1 of the ambient toric variety)."""
    _require_hodge_dim(p)
    q = dual(p)
    n = p.dim
    picard = len(q.lattice_points) - n - 1
    value = picard - _facet_interior_sum(q) + _paired_interior_sum(p, 1)
    return value, picard


def _paired_degree_sum(p: LatticePolytope, dim: int) -> int:
    return sum(degree(face) * degree(dual_face(p, face)) for face in p.faces(dim))


def euler_cy3(p: LatticePolytope) -> int:
    """Σ_edges d(Θ)d(Θ*) - Σ_2-faces d(Θ)d(Θ*) for n = 4."""
    if p.dim != 4:
        raise DimensionError(f"the Calabi-Yau threefold Euler formula needs n = 4, got {p.dim}")
    dual(p)
    return _paired_degree_sum(p, 1) - _paired_degree_sum(p, 2)


def _face_degree(face: Face) -> Optional[int]:
    return degree(face) if face.dim else None


def face_table(p: LatticePolytope) -> Tuple[FaceContribution, ...]:
    rows = []
    for d in range(p.dim):
        for face in p.faces(d):
            other = dual_face(p, face)
            rows.append(FaceContribution(
                face=face.label,
                dim=face.dim,
                codim=face.codim,
                l_star=count_points(face)[1],
                dual_l_star=count_points(other)[1],
                d=_face_degree(face),
                dual_d=_face_degree(other),
            ))
    return tuple(rows)


def hodge_report(p: LatticePolytope) -> HodgeReport:
    _require_hodge_dim(p)
    h_n21, affine = hodge_h_n21(p)
    h11, picard = hodge_h11(p)
    euler = euler_cy3(p) if p.dim == 4 else None
    if euler is not None and euler != 2 * (h11 - h_n21):
        raise ConsistencyError(f"Euler number {euler} ≠ 2(h11 - h21) = {2 * (h11 - h_n21)}")
    logger.info("hodge numbers: h11=%d h_n21=%d euler=%s", h11, h_n21, euler)
    return HodgeReport(
        n=p.dim,
        reflexive=True,
        h11=h11,
        h_n21=h_n21,
        h_n21_affine=affine,
        picard_ambient=picard,
        euler=euler,
        faces=face_table(p),
    )


# ============================================================================
# K3 SURFACES (n = 3)
# ============================================================================

def _require_k3(p: LatticePolytope) -> None:
    if p.dim != 3:
        raise DimensionError(f"K3 relations need n = 3, got {p.dim}")
    dual(p)


def check_24(p: LatticePolytope) -> int:
    """Σ over edges of d(Θ)d(Θ*); 24 for every reflexive 3-polytope."""
    _require_k3(p)
    return _paired_degree_sum(p, 1)


def k3_edge_rank(p: LatticePolytope) -> K3Ranks:
    """Ranks of the edge lattices of the K3 family and its mirror."""
    _require_k3(p)
    q = dual(p)
    degrees = edge_degree_pairs(p)
    rank_f = len(q.vertices) + 21 - sum(d for d, _ in degrees)
    rank_g = len(p.vertices) + 21 - sum(d_star for _, d_star in degrees)
    attained = all(d == 1 or d_star == 1 for d, d_star in degrees)
    return K3Ranks(rank_f, rank_g, attained)


# ============================================================================
# FUNDAMENTAL GROUPS AND DEGREE IDENTITIES
# ============================================================================

def fundamental_group(p: LatticePolytope, which: str = GroupKind.PAIR) -> Tuple[int, ...]:
    """Nontrivial invariant factors of π₁(Δ, M) or π₁(Δ)."""
    q = dual(p)
    if which == GroupKind.PAIR:
        return cokernel(q.vertices, p.dim)
    if which == GroupKind.POLYTOPE:
        pairing = [[sum(a * b for a, b in zip(v, w)) for w in q.vertices] for v in p.vertices]
        return tuple(d for d in snf(pairing) if d not in (0, 1))
    raise PreconditionError(f"unknown fundamental group kind {which!r}")


def euler_open_part_zero(p: LatticePolytope) -> DegreeDecomposition:
    """Pyramid decomposition d(Δ) = Σ_facets offset · d(facet)."""
    if not p.has_interior_origin():
        raise PreconditionError("degree decomposition needs the origin in the interior")
    # a 0-dimensional facet of a segment has unit volume
    facet_sum = sum(
        p.facets[face.facet_indices[0]][1] * (degree(face) if face.dim else 1)
        for face in p.faces(p.dim - 1)
    )
    return DegreeDecomposition(degree(p), facet_sum)


def edge_degree_pairs(p: LatticePolytope) -> List[Tuple[int, int]]:
    return [(degree(e), degree(dual_face(p, e))) for e in p.faces(1)]
