"""Sparse Laurent polynomials with exact rational coefficients."""
from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .config import JACOBIAN
from .errors import PreconditionError
from .lattice_core import LatticeVector, add
from .polytope import LatticePolytope

Coefficient = Union[int, Fraction]


class SupportKind:
    """Monomials carrying a generic coefficient."""
    ALL = "all"            # every lattice point of the polytope
    VERTICES = "vertices"  # vertices plus the constant term


@dataclass(frozen=True)
class LaurentPolynomial:
    dim: int
    terms: Mapping[LatticeVector, Fraction]

    @classmethod
    def from_terms(
        cls, dim: int, terms: Union[Mapping, Iterable[Tuple[Sequence[int], Coefficient]]]
    ) -> "LaurentPolynomial":
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: Dict[LatticeVector, Fraction] = defaultdict(Fraction)
        for exponent, coeff in items:
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != dim:
                raise PreconditionError(f"exponent {list(exponent)} does not have length {dim}")
            merged[exponent] += Fraction(coeff)
        return cls(dim, {e: c for e, c in sorted(merged.items()) if c != 0})

    @property
    def support(self) -> Tuple[LatticeVector, ...]:
        return tuple(sorted(self.terms))

    def coefficient(self, m: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.dim)

    def newton_polytope(self) -> LatticePolytope:
        if not self.terms:
            raise PreconditionError("the zero polynomial has no Newton polytope")
        return LatticePolytope.from_vertices(self.support)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def multiply(self, other: "LaurentPolynomial", modulus: Optional[int] = None) -> "LaurentPolynomial":
        product: Dict[LatticeVector, Fraction] = defaultdict(Fraction)
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                product[add(e1, e2)] += c1 * c2
        if modulus is not None:
            return LaurentPolynomial.from_terms(self.dim, ((e, c % modulus) for e, c in product.items()))
        return LaurentPolynomial.from_terms(self.dim, product)

    __mul__ = multiply

    def power(self, k: int, modulus: Optional[int] = None) -> "LaurentPolynomial":
        """f^k by repeated squaring; coefficients reduced mod ``modulus`` if given."""
        if k < 0:
            raise PreconditionError("negative powers are not supported")
        result = LaurentPolynomial.from_terms(self.dim, {(0,) * self.dim: 1})
        base = self.reduce_mod(modulus) if modulus is not None else self
        while k:
            if k & 1:
                result = result.multiply(base, modulus)
            k >>= 1
            if k:
                base = base.multiply(base, modulus)
        return result

    def scale(self, c: Coefficient) -> "LaurentPolynomial":
        return LaurentPolynomial.from_terms(self.dim, {e: v * c for e, v in self.terms.items()})

    def translate(self, v: Sequence[int]) -> "LaurentPolynomial":
        """Multiply by X^v."""
        return LaurentPolynomial.from_terms(self.dim, {add(e, v): c for e, c in self.terms.items()})

    def reduce_mod(self, p: int) -> "LaurentPolynomial":
        """Coefficients mapped to residues in [0, p)."""
        reduced = {}
        for e, c in self.terms.items():
            if c.denominator % p == 0:
                raise PreconditionError(f"coefficient {c} is not defined mod {p}")
            reduced[e] = c.numerator * pow(c.denominator, -1, p) % p
        return LaurentPolynomial.from_terms(self.dim, reduced)

    def evaluate(self, point: Sequence[Coefficient]) -> Fraction:
        """Exact value at a point of the torus (all coordinates nonzero)."""
        if any(x == 0 for x in point):
            raise PreconditionError("Laurent polynomials are evaluated on the torus only")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = Fraction(c)
            for x, k in zip(point, e):
                term *= Fraction(x) ** k
            total += term
        return total

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*X^{list(e)}" for e, c in sorted(self.terms.items()))
        return f"LaurentPolynomial(dim={self.dim}, {body or '0'})"


# ============================================================================
# FAMILIES
# ============================================================================

def generic_polynomial(
    p: LatticePolytope, seed: int, support: str = SupportKind.ALL
) -> LaurentPolynomial:
    """Nonzero small integer coefficients drawn from ``seed``."""
    rng = random.Random(seed)
    bound = JACOBIAN.COEFF_BOUND
    if support == SupportKind.ALL:
        exponents = p.lattice_points
    elif support == SupportKind.VERTICES:
        origin = (0,) * p.dim
        exponents = sorted(set(p.vertices) | ({origin} if p.contains(origin) else set()))
    else:
        raise PreconditionError(f"unknown support kind {support!r}")
    terms = {}
    for m in exponents:
        c = 0
        while c == 0:
            c = rng.randint(-bound, bound)
        terms[m] = c
    return LaurentPolynomial.from_terms(p.dim, terms)


def dwork_family(n: int, lam: Coefficient) -> LaurentPolynomial:
    """X_1 + ... + X_n + (X_1...X_n)^{-1} - λ; singular iff λ^{n+1} = (n+1)^{n+1}."""
    if n < 1:
        raise PreconditionError("the Dwork family needs n >= 1")
    terms: Dict[LatticeVector, Fraction] = {}
    for i in range(n):
        terms[tuple(1 if j == i else 0 for j in range(n))] = Fraction(1)
    terms[(-1,) * n] = Fraction(1)
    terms[(0,) * n] = -Fraction(lam)
    return LaurentPolynomial.from_terms(n, terms)
