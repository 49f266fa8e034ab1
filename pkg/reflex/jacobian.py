"""Graded slices of S_Δ, Jacobian ring dimensions and the ideal filtration.

Degree k of the cone ring is spanned by monomials X_0^k X^m with m in kΔ.
The Jacobian ideal is generated in degree 1 by F_0 = X_0 f and
F_i = X_0 X_i ∂f/∂X_i, so its degree-k part is spanned by F_i times the
monomials of degree k - 1. Only degrees k <= n + 1 are ever built.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple

from .config import ARITH, JACOBIAN, RankMode
from .ehrhart import delta_vector
from .errors import (
    ConsistencyError,
    NewtonPolytopeMismatchError,
    NotRegularError,
    PreconditionError,
)
from .lattice_core import LatticeVector, RationalMatrix, add, nullspace, random_prime, rank, rref_pivots
from .laurent import LaurentPolynomial, SupportKind, generic_polynomial
from .polytope import LatticePolytope, dual

logger = logging.getLogger(__name__)

Section = Dict[LatticeVector, Fraction]


@dataclass(frozen=True)
class GradedSlice:
    """Monomial basis of S^k: the lattice points of kΔ in lexicographic order."""
    k: int
    basis: Tuple[LatticeVector, ...]

    @cached_property
    def index(self) -> Dict[LatticeVector, int]:
        return {m: i for i, m in enumerate(self.basis)}

    def __len__(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class JacobianReport:
    regular: bool
    dims_R: Tuple[int, ...]
    psi: Tuple[int, ...]
    mode: str
    prime: Optional[int]
    seed: int
    dims_H: Optional[Tuple[int, ...]] = None
    dims_D: Optional[Tuple[int, ...]] = None
    filtration: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    pairing_perfect: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "regular": self.regular,
            "dims_R": list(self.dims_R),
            "psi": list(self.psi),
            "dims_H": list(self.dims_H) if self.dims_H is not None else None,
            "dims_D": list(self.dims_D) if self.dims_D is not None else None,
            "filtration": {str(i): list(d) for i, d in sorted(self.filtration.items())},
            "pairing_perfect": self.pairing_perfect,
            "rank_mode": self.mode,
            "prime": str(self.prime) if self.prime is not None else None,
            "seed": self.seed,
        }


def graded_slice(p: LatticePolytope, k: int) -> GradedSlice:
    if k < 0:
        raise PreconditionError(f"slice degree must be nonnegative, got {k}")
    return GradedSlice(k, tuple(p.lattice_points_scaled(k)))


def check_newton_polytope(p: LatticePolytope, f: LaurentPolynomial) -> None:
    """Newton polytope of f must equal p."""
    if f.dim != p.dim:
        raise PreconditionError(f"polynomial lives in dimension {f.dim}, polytope in {p.dim}")
    missing = [v for v in p.vertices if f.coefficient(v) == 0]
    stray = [m for m in f.support if not p.contains(m)]
    if missing or stray:
        raise NewtonPolytopeMismatchError(missing, stray)


def derivative_sections(p: LatticePolytope, f: LaurentPolynomial) -> List[Section]:
    """F_0..F_n as maps from exponents of slice 1 to coefficients."""
    check_newton_polytope(p, f)
    sections: List[Section] = [dict(f.terms)]
    for i in range(p.dim):
        sections.append({m: m[i] * c for m, c in f.terms.items() if m[i] != 0})
    return sections


def section_vectors(p: LatticePolytope, f: LaurentPolynomial) -> List[Tuple[Fraction, ...]]:
    """Coordinate vectors of F_0..F_n in the slice-1 basis."""
    basis = graded_slice(p, 1)
    return [
        tuple(section.get(m, Fraction(0)) for m in basis.basis)
        for section in derivative_sections(p, f)
    ]


class JacobianRing:
    """Degree-wise linear algebra of R_f = S_Δ / J_f up to degree n + 1."""

    def __init__(
        self,
        p: LatticePolytope,
        f: LaurentPolynomial,
        mode: str = RankMode.MODULAR,
        prime: Optional[int] = None,
        seed: int = ARITH.DEFAULT_SEED,
    ) -> None:
        self.p = p
        self.f = f
        self.mode = mode
        self.seed = seed
        if mode == RankMode.MODULAR and prime is None:
            prime = random_prime(seed)
        self.prime = prime if mode == RankMode.MODULAR else None
        self.sections = derivative_sections(p, f)
        self._slices: Dict[int, GradedSlice] = {}
        self._relations: Dict[int, RationalMatrix] = {}
        self._ranks: Dict[int, int] = {}
        self._codims: Dict[int, List[int]] = {}

    @property
    def n(self) -> int:
        return self.p.dim

    def slice(self, k: int) -> GradedSlice:
        if k not in self._slices:
            self._slices[k] = graded_slice(self.p, k)
        return self._slices[k]

    def _rank(self, a: RationalMatrix) -> int:
        return rank(a, self.mode, self.prime)

    def relations(self, k: int) -> RationalMatrix:
        """Rows spanning J^k inside S^k."""
        if k not in self._relations:
            target = self.slice(k)
            rows: List[Dict[int, Fraction]] = []
            if k > 0:
                for m in self.slice(k - 1).basis:
                    for section in self.sections:
                        rows.append({target.index[add(e, m)]: c for e, c in section.items()})
            self._relations[k] = RationalMatrix.from_sparse(rows, len(target))
        return self._relations[k]

    def relation_rank(self, k: int) -> int:
        if k not in self._ranks:
            started = time.perf_counter()
            self._ranks[k] = self._rank(self.relations(k))
            logger.info(
                "degree %d: %d x %d relation matrix, rank %d (%.2fs)",
                k, self.relations(k).rows, len(self.slice(k)), self._ranks[k],
                time.perf_counter() - started,
            )
        return self._ranks[k]

    def dims_R(self) -> Tuple[int, ...]:
        return tuple(len(self.slice(k)) - self.relation_rank(k) for k in range(self.n + 2))

    # ------------------------------------------------------------------
    # Ideal filtration
    # ------------------------------------------------------------------

    def codim(self, m: LatticeVector, k: int) -> int:
        """Codimension of the smallest face of Δ containing m/k."""
        keys = frozenset(range(len(self.p.vertices)))
        for j, (nrm, off) in enumerate(self.p.facets):
            if sum(a * b for a, b in zip(m, nrm)) + k * off == 0:
                keys &= self.p.facet_vertex_sets[j]
        return self.p.faces_by_vertices[keys].codim

    def ideal_columns(self, level: int, k: int) -> List[int]:
        """Slice-k indices of monomials in I^{(level)}: smallest face codim < level."""
        if k == 0:
            return []
        if k not in self._codims:
            self._codims[k] = [self.codim(m, k) for m in self.slice(k).basis]
        return [i for i, c in enumerate(self._codims[k]) if c < level]

    def ideal_image_dim(self, level: int, k: int) -> int:
        """dim of the image of I^{(level)} in R^k.

        rank([J; E_S]) = |S| + rank of J with the columns in S removed.
        """
        columns = set(self.ideal_columns(level, k))
        if not columns:
            return 0
        keep = [j for j in range(len(self.slice(k))) if j not in columns]
        position = {j: i for i, j in enumerate(keep)}
        restricted = RationalMatrix.from_sparse(
            [{position[j]: c for j, c in row.items() if j in position} for row in self.relations(k).entries],
            len(keep),
        )
        return len(columns) + self._rank(restricted) - self.relation_rank(k)

    def filtration_dims(self) -> Dict[int, Tuple[int, ...]]:
        return {
            level: tuple(self.ideal_image_dim(level, k) for k in range(self.n + 2))
            for level in range(1, self.n + 1)
        }

    def dualizing_dims(self) -> Tuple[int, ...]:
        """dim D^k = l*(kΔ) - rank of F·I^{(1),k-1} inside I^{(1),k}."""
        dims = []
        for k in range(self.n + 2):
            interior = self.ideal_columns(1, k)
            if not interior:
                dims.append(0)
                continue
            position = {self.slice(k).basis[j]: i for i, j in enumerate(interior)}
            rows = []
            for j in self.ideal_columns(1, k - 1) if k > 1 else []:
                m = self.slice(k - 1).basis[j]
                for section in self.sections:
                    rows.append({position[add(e, m)]: c for e, c in section.items()})
            dims.append(len(interior) - self._rank(RationalMatrix.from_sparse(rows, len(interior))))
        return tuple(dims)

    # ------------------------------------------------------------------
    # Gorenstein pairing
    # ------------------------------------------------------------------

    def quotient_basis(self, k: int) -> List[LatticeVector]:
        """Standard monomials of R^k: non-pivot columns of rref(J^k)."""
        pivots = set(rref_pivots(self.relations(k), self.mode, self.prime))
        return [m for i, m in enumerate(self.slice(k).basis) if i not in pivots]

    def pairing_check(self) -> bool:
        """Every R^i x R^{n-i} -> R^n is perfect and dim R^n = 1."""
        n = self.n
        functionals = nullspace(self.relations(n), self.mode, self.prime)
        if len(functionals) != 1:
            logger.info("dim R^n = %d, pairing cannot be perfect", len(functionals))
            return False
        functional = functionals[0]
        top = self.slice(n).index
        for i in range(n + 1):
            left, right = self.quotient_basis(i), self.quotient_basis(n - i)
            if len(left) != len(right):
                return False
            if not left:
                continue
            matrix = RationalMatrix.from_dense(
                [[functional[top[add(a, b)]] for b in right] for a in left], len(right)
            )
            if self._rank(matrix) != len(left):
                logger.info("pairing in degree %d is degenerate", i)
                return False
        return True


# ============================================================================
# MODULE-LEVEL OPERATIONS
# ============================================================================

def jacobian_dims(
    p: LatticePolytope,
    f: LaurentPolynomial,
    mode: str = RankMode.MODULAR,
    prime: Optional[int] = None,
    seed: int = ARITH.DEFAULT_SEED,
) -> JacobianReport:
    """dim R^k for k = 0..n+1 and the regularity verdict."""
    ring = JacobianRing(p, f, mode, prime, seed)
    return _dims_report(ring)


def _dims_report(ring: JacobianRing) -> JacobianReport:
    psi = delta_vector(ring.p).psi
    dims = ring.dims_R()
    regular = dims[: ring.n + 1] == psi and dims[ring.n + 1] == 0
    return JacobianReport(regular, dims, psi, ring.mode, ring.prime, ring.seed)


def _require_regular(report: JacobianReport) -> None:
    if not report.regular:
        raise NotRegularError(report.dims_R, report.psi + (0,))


def ideal_filtration_dims(
    p: LatticePolytope,
    f: LaurentPolynomial,
    mode: str = RankMode.MODULAR,
    prime: Optional[int] = None,
    seed: int = ARITH.DEFAULT_SEED,
) -> Dict[int, Tuple[int, ...]]:
    """Images of I^{(i)} in R^k for 1 <= i <= n; entry 1 is H_f."""
    ring = JacobianRing(p, f, mode, prime, seed)
    _require_regular(_dims_report(ring))
    return ring.filtration_dims()


def dualizing_dims(
    p: LatticePolytope,
    f: LaurentPolynomial,
    mode: str = RankMode.MODULAR,
    prime: Optional[int] = None,
    seed: int = ARITH.DEFAULT_SEED,
) -> Tuple[int, ...]:
    ring = JacobianRing(p, f, mode, prime, seed)
    _require_regular(_dims_report(ring))
    return _checked_dualizing_dims(ring)


def _checked_dualizing_dims(ring: JacobianRing) -> Tuple[int, ...]:
    dims = ring.dualizing_dims()
    phi = delta_vector(ring.p).phi
    if dims != phi:
        raise ConsistencyError(f"dualizing dimensions {list(dims)} differ from φ = {list(phi)}")
    return dims


def gorenstein_pairing_check(
    p: LatticePolytope,
    f: LaurentPolynomial,
    mode: str = RankMode.MODULAR,
    prime: Optional[int] = None,
    seed: int = ARITH.DEFAULT_SEED,
) -> bool:
    dual(p)
    ring = JacobianRing(p, f, mode, prime, seed)
    _require_regular(_dims_report(ring))
    return ring.pairing_check()


def jacobian_report(
    p: LatticePolytope,
    f: LaurentPolynomial,
    mode: str = RankMode.MODULAR,
    prime: Optional[int] = None,
    seed: int = ARITH.DEFAULT_SEED,
) -> JacobianReport:
    """Everything at once: R, and for regular f also H, D and the pairing."""
    ring = JacobianRing(p, f, mode, prime, seed)
    report = _dims_report(ring)
    if not report.regular:
        return report
    filtration = ring.filtration_dims()
    dims_D = _checked_dualizing_dims(ring)
    perfect = ring.pairing_check() if all(off == 1 for off in p.offsets) else None
    return JacobianReport(
        regular=True,
        dims_R=report.dims_R,
        psi=report.psi,
        mode=ring.mode,
        prime=ring.prime,
        seed=ring.seed,
        dims_H=filtration[1] if filtration else None,
        dims_D=dims_D,
        filtration=filtration,
        pairing_perfect=perfect,
    )


def find_regular(
    p: LatticePolytope,
    seed: int = ARITH.DEFAULT_SEED,
    support: str = SupportKind.ALL,
    mode: str = RankMode.MODULAR,
    prime: Optional[int] = None,
) -> Tuple[LaurentPolynomial, JacobianReport]:
    """Seeded generic polynomial on p that passes the regularity test."""
    report = None
    for attempt in range(JACOBIAN.MAX_RESAMPLES):
        f = generic_polynomial(p, seed + attempt, support)
        report = jacobian_dims(p, f, mode, prime, seed)
        if report.regular:
            if attempt:
                logger.info("regular polynomial found after %d resamples", attempt)
            return f, report
        logger.debug("coefficient seed %d is not regular: %s", seed + attempt, report.dims_R)
    raise NotRegularError(report.dims_R, report.psi + (0,))
