"""Ehrhart polynomials, δ-vectors and reciprocity checks.

All counts come from ``lattice_points_in`` on kΔ given by scaled facet
offsets; the polytope is never re-hulled.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

from .errors import ConsistencyError, PreconditionError
from .lattice_core import lattice_points_in
from .polytope import LatticePolytope

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EhrhartPolynomial:
    """Λ(t) with exact coefficients, constant term first."""
    coefficients: Tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, t: int) -> Fraction:
        return evaluate(self, t)

    def as_strings(self) -> List[str]:
        return [str(c) for c in self.coefficients]


@dataclass(frozen=True)
class DeltaVector:
    """ψ₀..ψₙ with the derived φ₀..φ_{n+1}."""
    psi: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.psi) - 1

    @property
    def phi(self) -> Tuple[int, ...]:
        padded = self.psi + (0,)
        return tuple(padded[self.n + 1 - i] for i in range(self.n + 2))

    @property
    def total(self) -> int:
        return sum(self.psi)

    def is_symmetric(self) -> bool:
        return self.psi == tuple(reversed(self.psi))


@dataclass(frozen=True)
class ReciprocityRow:
    k: int
    predicted: Fraction
    counted: int

    @property
    def ok(self) -> bool:
        return self.predicted == self.counted


@dataclass(frozen=True)
class ReciprocityReport:
    """Per-k reciprocity rows plus the out-of-sample rows at k = n+1, n+2."""
    interior: Tuple[ReciprocityRow, ...]
    out_of_sample: Tuple[ReciprocityRow, ...]

    @property
    def passed(self) -> bool:
        return all(row.ok for row in self.interior + self.out_of_sample)

    def failures(self) -> List[ReciprocityRow]:
        return [row for row in self.interior + self.out_of_sample if not row.ok]


def lattice_counts(p: LatticePolytope, k_max: int) -> List[int]:
    """l(kΔ) for k = 0..k_max."""
    return [len(p.lattice_points_scaled(k)) for k in range(k_max + 1)]


def interior_counts(p: LatticePolytope, k_max: int) -> List[int]:
    """l*(kΔ) for k = 0..k_max, counted directly."""
    counts = [0]
    for k in range(1, k_max + 1):
        strict = [(nrm, k * off - 1) for nrm, off in p.facets]
        counts.append(len(lattice_points_in(strict, p.bounding_box(k))))
    return counts


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _interpolate(values: Sequence[int]) -> Tuple[Fraction, ...]:
    """Coefficients of the polynomial through (k, values[k]), k = 0..len-1."""
    n = len(values) - 1
    coeffs = [Fraction(0)] * (n + 1)
    for j, y in enumerate(values):
        if y == 0:
            continue
        basis = [Fraction(1)]
        denom = 1
        for m in range(n + 1):
            if m != j:
                basis = _poly_mul(basis, [Fraction(-m), Fraction(1)])
                denom *= j - m
        for i, c in enumerate(basis):
            coeffs[i] += c * y / denom
    return tuple(coeffs)


@lru_cache(maxsize=256)
def ehrhart(p: LatticePolytope) -> EhrhartPolynomial:
    """Λ(t) from l(kΔ), k = 0..n, by exact Lagrange interpolation."""
    counts = lattice_counts(p, p.dim)
    logger.debug("ehrhart counts for dim %d: %s", p.dim, counts)
    return EhrhartPolynomial(_interpolate(counts))


def evaluate(poly: EhrhartPolynomial, t: int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(poly.coefficients):
        acc = acc * t + c
    return acc


@lru_cache(maxsize=256)
def delta_vector(p: LatticePolytope) -> DeltaVector:
    """ψ from (1 - t)^{n+1} Σ l(kΔ) t^k truncated at degree n+1."""
    n = p.dim
    counts = lattice_counts(p, n + 1)
    series = [
        sum((-1) ** j * math.comb(n + 1, j) * counts[i - j] for j in range(i + 1))
        for i in range(n + 2)
    ]
    if series[n + 1] != 0:
        raise ConsistencyError(
            f"δ-series has nonzero coefficient {series[n + 1]} in degree {n + 1}"
        )
    return DeltaVector(tuple(series[: n + 1]))


def is_symmetric(delta: DeltaVector) -> bool:
    return delta.is_symmetric()


def check_reciprocity(p: LatticePolytope, k_max: int) -> ReciprocityReport:
    """Compare (-1)^n Λ(-k) with l*(kΔ), and Λ(k) with l(kΔ) past the fit."""
    if k_max < 1:
        raise PreconditionError(f"k_max must be at least 1, got {k_max}")
    n = p.dim
    poly = ehrhart(p)
    interior = interior_counts(p, k_max)
    rows = tuple(
        ReciprocityRow(k, (-1) ** n * poly(-k), interior[k]) for k in range(1, k_max + 1)
    )
    extra = tuple(
        ReciprocityRow(k, poly(k), len(p.lattice_points_scaled(k))) for k in (n + 1, n + 2)
    )
    report = ReciprocityReport(rows, extra)
    if not report.passed:
        logger.warning("reciprocity failures: %s", report.failures())
    return report


def double_interior_count(p: LatticePolytope) -> Tuple[int, int]:
    """(l*(2Δ), l(Δ)); equal for reflexive Δ."""
    return interior_counts(p, 2)[2], len(p.lattice_points)
