"""Constant-term period series, recurrence fitting and the Hasse test."""
from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from sympy import isprime

from .config import PERIODS, RankMode
from .errors import PreconditionError
from .lattice_core import LatticeVector, RationalMatrix, add, dot, nullspace
from .laurent import LaurentPolynomial
from .polytope import LatticePolytope, dual
from .reports import polytope_summary

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PeriodSeries:
    """B_0..B_kmax for the family with coefficient 1 on every boundary point."""
    coefficients: Tuple[int, ...]
    boundary: Tuple[LatticeVector, ...]
    polytope: Optional[LatticePolytope] = field(default=None, compare=False, repr=False)
    note: str = "boundary coefficients 1, parameter at the interior point"

    @property
    def kmax(self) -> int:
        return len(self.coefficients) - 1

    @property
    def compression_step(self) -> int:
        step = 0
        for i, b in enumerate(self.coefficients[1:], start=1):
            if b:
                step = math.gcd(step, i)
        return step or 1

    def compressed(self) -> Tuple[int, ...]:
        """Coefficients at multiples of the compression step."""
        return self.coefficients[:: self.compression_step]

    def to_dict(self, recurrence: Optional["Recurrence"] = None) -> Dict[str, Any]:
        """The periods record; ``recurrence`` is null until one is fitted."""
        return {
            "polytope": polytope_summary(self.polytope) if self.polytope is not None else None,
            "kmax": self.kmax,
            "coefficients": [str(b) for b in self.coefficients],
            "boundary_points": [list(m) for m in self.boundary],
            "compression_step": self.compression_step,
            "recurrence": recurrence.to_dict() if recurrence is not None else None,
            "note": self.note,
        }


@dataclass(frozen=True)
class Recurrence:
    """Σ_j p_j(k) c_{k-j} = 0; polys[j] lists p_j's coefficients, constant first."""
    order: int
    degree: int
    polys: Tuple[Tuple[int, ...], ...]

    def evaluate(self, j: int, k: int) -> int:
        return sum(c * k ** t for t, c in enumerate(self.polys[j]))

    def residual(self, values: Sequence[int], k: int) -> int:
        return sum(self.evaluate(j, k) * values[k - j] for j in range(self.order + 1))

    def annihilates(self, values: Sequence[int]) -> bool:
        return all(self.residual(values, k) == 0 for k in range(self.order, len(values)))

    def as_strings(self) -> List[str]:
        return [_poly_string(poly) for poly in self.polys]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "order": self.order,
            "degree": self.degree,
            "polys": [[str(c) for c in poly] for poly in self.polys],
            "display": self.as_strings(),
        }


def _poly_string(coeffs: Sequence[int], var: str = "k") -> str:
    parts = []
    for t in range(len(coeffs) - 1, -1, -1):
        c = coeffs[t]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if t == 0:
            body = str(mag)
        else:
            power = var if t == 1 else f"{var}^{t}"
            body = power if mag == 1 else f"{mag}*{power}"
        parts.append((sign, body))
    if not parts:
        return "0"
    head_sign, head = parts[0]
    text = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


# ============================================================================
# SERIES
# ============================================================================

def pi0(p: LatticePolytope, kmax: int) -> PeriodSeries:
    """B_i = constant term of (Σ_{boundary m} X^m)^i, i = 0..kmax.

    A partial sum e with r steps left can only return to the origin if
    -e lies in rΔ, so every other partial sum is dropped.
    """
    dual(p)
    if kmax < 0:
        raise PreconditionError(f"kmax must be nonnegative, got {kmax}")
    points = p.boundary_points()
    # facet values <m, u> of each step, so partial sums carry them along
    steps = [(m, tuple(dot(m, u) for u in p.normals)) for m in points]
    offsets = p.offsets
    origin = (0,) * p.dim
    dist: Dict[LatticeVector, int] = {origin: 1}
    levels: Dict[LatticeVector, LatticeVector] = {origin: (0,) * len(offsets)}
    coefficients = [1]
    for step in range(1, kmax + 1):
        remaining = kmax - step
        ceiling = tuple(remaining * off for off in offsets)
        grown: Dict[LatticeVector, int] = defaultdict(int)
        grown_levels: Dict[LatticeVector, LatticeVector] = {}
        for e, count in dist.items():
            level = levels[e]
            for m, m_level in steps:
                t_level = add(level, m_level)
                if any(v > c for v, c in zip(t_level, ceiling)):
                    continue
                t = add(e, m)
                grown[t] += count
                grown_levels[t] = t_level
        dist, levels = grown, grown_levels
        coefficients.append(dist.get(origin, 0))
        logger.debug("pi0 step %d: %d partial sums", step, len(dist))
    return PeriodSeries(tuple(coefficients), tuple(points), p)


# ============================================================================
# RECURRENCES
# ============================================================================

def _rows(values: Sequence[int], order: int, degree: int, ks: range) -> List[List[int]]:
    return [[k ** t * values[k - j] for j in range(order + 1) for t in range(degree + 1)] for k in ks]


def _fit(values: Sequence[int], order: int, degree: int, holdout: int) -> Optional[Recurrence]:
    unknowns = (order + 1) * (degree + 1)
    train_end = len(values) - holdout
    if train_end - order < unknowns:
        return None
    basis = nullspace(
        RationalMatrix.from_dense(_rows(values, order, degree, range(order, train_end)), unknowns),
        RankMode.EXACT,
    )
    if len(basis) > 1:
        # several solutions on the training rows: the held-out rows select the
        # combination, and must still leave at least one independent check
        held = _rows(values, order, degree, range(train_end, len(values)))
        projected = [[sum(x * v[c] for c, x in enumerate(row)) for v in basis] for row in held]
        combos = nullspace(RationalMatrix.from_dense(projected, len(basis)), RankMode.EXACT)
        used = len(basis) - len(combos)
        if len(held) <= used:
            return None
        logger.debug("order %d degree %d: %d-dimensional fit, %d held-out rows used to select",
                     order, degree, len(basis), used)
        basis = [tuple(sum(c[i] * basis[i][col] for i in range(len(basis))) for col in range(unknowns))
                 for c in combos]
    for vector in basis:
        candidate = _normalize(vector, order, degree)
        if candidate is not None and candidate.annihilates(values):
            return candidate
    return None


def _normalize(vector: Sequence[Fraction], order: int, degree: int) -> Optional[Recurrence]:
    denom = 1
    for x in vector:
        denom = denom * x.denominator // math.gcd(denom, x.denominator)
    ints = [int(x * denom) for x in vector]
    content = 0
    for x in ints:
        content = math.gcd(content, x)
    if content == 0:
        return None
    ints = [x // content for x in ints]
    polys = [tuple(ints[j * (degree + 1):(j + 1) * (degree + 1)]) for j in range(order + 1)]
    lead = next((c for c in reversed(polys[0]) if c), 0)
    if lead == 0:
        return None
    if lead < 0:
        polys = [tuple(-c for c in poly) for poly in polys]
    return Recurrence(order, degree, tuple(polys))


def fit_recurrence(
    series: Union[PeriodSeries, Sequence[int]],
    max_order: int = PERIODS.MAX_ORDER,
    max_degree: int = PERIODS.MAX_DEGREE,
    holdout: int = PERIODS.HOLDOUT,
) -> Optional[Recurrence]:
    """Smallest (order + degree, order) recurrence that also fits held-out terms.

    A ``PeriodSeries`` is fitted on its compressed index. Returns None when
    nothing within the bounds validates.
    """
    if holdout < PERIODS.HOLDOUT:
        raise PreconditionError(f"at least {PERIODS.HOLDOUT} held-out terms are required")
    values = series.compressed() if isinstance(series, PeriodSeries) else tuple(series)
    needed = (max_order + 1) * (max_degree + 1) + max_order + holdout
    if len(values) < needed:
        raise PreconditionError(
            f"{len(values)} terms given; bounds ({max_order}, {max_degree}) need {needed}"
        )
    for total in range(1, max_order + max_degree + 1):
        for order in range(1, min(total, max_order) + 1):
            degree = total - order
            if degree > max_degree:
                continue
            found = _fit(values, order, degree, holdout)
            if found is not None:
                logger.info("recurrence of order %d, degree %d found", order, degree)
                return found
    logger.info("no recurrence with order <= %d and degree <= %d", max_order, max_degree)
    return None


def extended_check(
    p: LatticePolytope,
    recurrence: Recurrence,
    series: PeriodSeries,
    extra: int = PERIODS.EXTRA_CHECK,
) -> bool:
    """Recompute ``extra`` further compressed coefficients and test them too."""
    step = series.compression_step
    longer = pi0(p, series.kmax + extra * step)
    return recurrence.annihilates(longer.coefficients[::step])


# ============================================================================
# HASSE TEST
# ============================================================================

def hasse_constant_term(f: LaurentPolynomial, prime: int) -> int:
    """Constant coefficient of f^{p-1} reduced mod p."""
    if not isprime(prime):
        raise PreconditionError(f"{prime} is not prime")
    if prime > PERIODS.HASSE_MAX_PRIME:
        raise PreconditionError(f"prime {prime} exceeds the bound {PERIODS.HASSE_MAX_PRIME}")
    if not f.is_integral():
        raise PreconditionError("the Hasse test needs integer coefficients")
    newton = f.newton_polytope()
    if any(off != 1 for off in newton.offsets):
        raise PreconditionError("the Newton polytope of f is not reflexive")
    power = f.power(prime - 1, modulus=prime)
    return int(power.constant_term()) % prime
