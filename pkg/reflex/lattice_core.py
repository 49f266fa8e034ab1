"""Exact integer and rational linear algebra plus lattice-point enumeration.

Everything here works on plain Python ints and ``fractions.Fraction`` so no
result can overflow. Vectors are tuples, integer matrices are tuples of row
tuples. Large sparse eliminations (ranks of Jacobian slices) are delegated to
sympy's ``DomainMatrix`` over ``QQ`` or ``GF(p)``.
"""
from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import ppl
from sympy import nextprime
from sympy.polys.domains import GF, QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from .config import ARITH, RankMode
from .errors import UnboundedRegionError

logger = logging.getLogger(__name__)

LatticeVector = Tuple[int, ...]
IntMatrix = Tuple[Tuple[int, ...], ...]
Facet = Tuple[LatticeVector, int]  # (inner normal, offset): <x, normal> >= -offset
Box = Sequence[Tuple[int, int]]
Rational = Union[int, Fraction]


# ============================================================================
# VECTORS AND SMALL MATRICES
# ============================================================================

def dot(a: Sequence[Rational], b: Sequence[Rational]) -> Rational:
    return sum(x * y for x, y in zip(a, b))


def add(a: Sequence[int], b: Sequence[int]) -> LatticeVector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> LatticeVector:
    return tuple(x - y for x, y in zip(a, b))


def scale(a: Sequence[int], k: int) -> LatticeVector:
    return tuple(k * x for x in a)


def primitive(v: Sequence[int]) -> LatticeVector:
    """Divide ``v`` by the gcd of its entries (zero vector unchanged)."""
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g in (0, 1):
        return tuple(v)
    return tuple(x // g for x in v)


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> IntMatrix:
    if not m:
        return tuple(() for _ in range(cols or 0))
    return tuple(zip(*m))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ============================================================================
# FRACTION-FREE ELIMINATION
# ============================================================================

def _bareiss_echelon(rows: List[List[int]], ncols: int) -> Tuple[List[List[int]], List[int]]:
    """Fraction-free row echelon form; returns (rows, pivot columns)."""
    a = [list(r) for r in rows]
    nrows = len(a)
    pivots: List[int] = []
    r = 0
    prev = 1
    for c in range(ncols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pr = a[r]
        for i in range(r + 1, nrows):
            ai = a[i]
            f = ai[c]
            for j in range(c + 1, ncols):
                ai[j] = (pr[c] * ai[j] - f * pr[j]) // prev
            ai[c] = 0
        prev = pr[c]
        pivots.append(c)
        r += 1
    return a, pivots


def int_rank(m: Sequence[Sequence[int]]) -> int:
    if not m or not m[0]:
        return 0
    _, pivots = _bareiss_echelon([list(r) for r in m], len(m[0]))
    return len(pivots)


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    """Dimension of the affine span of ``points`` (-1 for no points)."""
    if not points:
        return -1
    base = points[0]
    return int_rank([sub(p, base) for p in points[1:]])


def _integral_row(row: Sequence[Rational]) -> List[int]:
    denom = 1
    for x in row:
        if isinstance(x, Fraction):
            denom = denom * x.denominator // math.gcd(denom, x.denominator)
    return [int(x * denom) for x in row]


# ============================================================================
# RATIONAL MATRICES
# ============================================================================

@dataclass(frozen=True)
class RationalMatrix:
    """Sparse exact matrix: one ``{col: Fraction}`` dict per row, no zeros stored."""
    rows: int
    cols: int
    entries: Tuple[Dict[int, Fraction], ...]

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[Rational]], cols: Optional[int] = None) -> "RationalMatrix":
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        data = tuple(
            {j: Fraction(x) for j, x in enumerate(row) if x != 0} for row in rows
        )
        return cls(len(rows), ncols, data)

    @classmethod
    def from_sparse(cls, rows: Sequence[Dict[int, Rational]], cols: int) -> "RationalMatrix":
        data = tuple({j: Fraction(x) for j, x in row.items() if x != 0} for row in rows)
        return cls(len(rows), cols, data)

    def to_dense(self) -> List[List[Fraction]]:
        dense = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for i, row in enumerate(self.entries):
            for j, x in row.items():
                dense[i][j] = x
        return dense

    def column(self, k: int) -> List[Fraction]:
        return [row.get(k, Fraction(0)) for row in self.entries]


def field(mode: str, prime: Optional[int] = None) -> Tuple[object, Callable[[Fraction], object]]:
    """Return a sympy field for ``mode`` and a converter from Fraction."""
    if mode == RankMode.EXACT:
        return QQ, lambda q: QQ(q.numerator, q.denominator)
    if mode != RankMode.MODULAR:
        raise ValueError(f"unknown rank mode {mode!r}")
    if prime is None:
        raise ValueError("modular mode needs a prime")
    domain = GF(prime)

    def convert(q: Fraction) -> object:
        return domain(q.numerator * pow(q.denominator, -1, prime) % prime)

    return domain, convert


def domain_matrix(a: RationalMatrix, mode: str, prime: Optional[int] = None) -> DomainMatrix:
    """Sparse sympy matrix over QQ (exact) or GF(prime) (modular)."""
    domain, convert = field(mode, prime)
    rows: Dict[int, Dict[int, object]] = {}
    for i, row in enumerate(a.entries):
        converted = {}
        for j, x in row.items():
            value = convert(x)
            if value:
                converted[j] = value
        if converted:
            rows[i] = converted
    return DomainMatrix(rows, (a.rows, a.cols), domain)


def random_prime(seed: int = ARITH.DEFAULT_SEED) -> int:
    """A prime in (2^60, 2^62) drawn deterministically from ``seed``."""
    low, high = ARITH.PRIME_WINDOW
    rng = random.Random(seed)
    prime = int(nextprime(rng.randrange(low, high)))
    while prime >= high:
        prime = int(nextprime(rng.randrange(low, high)))
    return prime


def rank(
    a: RationalMatrix,
    mode: str = RankMode.EXACT,
    prime: Optional[int] = None,
    seed: int = ARITH.DEFAULT_SEED,
) -> int:
    """Rank over QQ, or over GF(p) for ``mode == "modular"``.

    The modular rank never exceeds the exact rank; the two agree unless the
    prime divides every maximal nonzero minor.
    """
    if a.rows == 0 or a.cols == 0 or not any(a.entries):
        return 0
    return int(domain_matrix(a, mode, _resolve_prime(mode, prime, seed)).rank())


def _resolve_prime(mode: str, prime: Optional[int], seed: int) -> Optional[int]:
    if mode == RankMode.MODULAR and prime is None:
        return random_prime(seed)
    return prime


def rref_pivots(
    a: RationalMatrix,
    mode: str = RankMode.EXACT,
    prime: Optional[int] = None,
    seed: int = ARITH.DEFAULT_SEED,
) -> Tuple[int, ...]:
    """Pivot columns of the reduced row echelon form over the field."""
    if a.rows == 0 or not any(a.entries):
        return ()
    _, pivots = domain_matrix(a, mode, _resolve_prime(mode, prime, seed)).rref()
    return tuple(int(c) for c in pivots)


def nullspace(
    a: RationalMatrix,
    mode: str = RankMode.EXACT,
    prime: Optional[int] = None,
    seed: int = ARITH.DEFAULT_SEED,
) -> List[Tuple[Fraction, ...]]:
    """Basis of {x : a x = 0} over QQ, or over GF(p) with entries as residues."""
    if a.rows == 0 or not any(a.entries):
        return [tuple(Fraction(int(i == j)) for j in range(a.cols)) for i in range(a.cols)]
    prime = _resolve_prime(mode, prime, seed)
    kernel = domain_matrix(a, mode, prime).nullspace().to_Matrix()
    basis = []
    for i in range(kernel.rows):
        row = []
        for j in range(kernel.cols):
            x = kernel[i, j]
            value = Fraction(int(x.p), int(x.q))
            row.append(value % prime if prime is not None and mode == RankMode.MODULAR else value)
        basis.append(tuple(row))
    return basis


def solve_rational(a: RationalMatrix, b: RationalMatrix) -> Optional[RationalMatrix]:
    """Exact solution of ``a x = b``, or None if the system is inconsistent.

    Free variables are set to zero. Elimination is fraction-free on the
    augmented system scaled to integers.
    """
    if a.rows != b.rows:
        raise ValueError(f"shape mismatch: {a.rows} rows vs {b.rows} rows")
    n, q = a.cols, b.cols
    dense_a, dense_b = a.to_dense(), b.to_dense()
    augmented = [_integral_row(ra + rb) for ra, rb in zip(dense_a, dense_b)]
    echelon, pivots = _bareiss_echelon(augmented, n + q)
    if any(c >= n for c in pivots):
        return None
    solution = [[Fraction(0)] * q for _ in range(n)]
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        row = echelon[r]
        for k in range(q):
            acc = Fraction(row[n + k])
            for j in range(c + 1, n):
                if row[j]:
                    acc -= row[j] * solution[j][k]
            solution[c][k] = acc / row[c]
    return RationalMatrix.from_dense(solution, q)


def solve_vector(rows: Sequence[Sequence[Rational]], rhs: Sequence[Rational]) -> Optional[Tuple[Fraction, ...]]:
    a = RationalMatrix.from_dense(rows, len(rows[0]) if rows else 0)
    b = RationalMatrix.from_dense([[x] for x in rhs], 1)
    x = solve_rational(a, b)
    if x is None:
        return None
    return tuple(x.column(0))


# ============================================================================
# HERMITE AND SMITH NORMAL FORMS
# ============================================================================

def hnf(m: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form ``h = u m`` with ``u`` unimodular.

    Pivots are positive, entries above a pivot lie in ``[0, pivot)``, zero
    rows are at the bottom.
    """
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    h = [list(row) for row in m]
    u = [list(row) for row in identity(nrows)]

    def combine(i: int, r: int, q: int) -> None:
        # row_i -= q * row_r
        hi, hr, ui, ur = h[i], h[r], u[i], u[r]
        for j in range(ncols):
            hi[j] -= q * hr[j]
        for j in range(nrows):
            ui[j] -= q * ur[j]

    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        while True:
            candidates = [i for i in range(r, nrows) if h[i][c] != 0]
            if not candidates:
                break
            p = min(candidates, key=lambda i: abs(h[i][c]))
            h[r], h[p] = h[p], h[r]
            u[r], u[p] = u[p], u[r]
            finished = True
            for i in range(r + 1, nrows):
                if h[i][c]:
                    combine(i, r, h[i][c] // h[r][c])
                    if h[i][c]:
                        finished = False
            if finished:
                break
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            if h[i][c]:
                combine(i, r, h[i][c] // h[r][c])
        r += 1
    return as_matrix(h), as_matrix(u)


def hnf_basis(vectors: Sequence[Sequence[int]]) -> IntMatrix:
    """Nonzero rows of the HNF: a canonical basis of the generated lattice."""
    if not vectors:
        return ()
    h, _ = hnf(vectors)
    return tuple(row for row in h if any(row))


def _divisibility_chain(values: Sequence[int]) -> Tuple[int, ...]:
    vals = [abs(v) for v in values]
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            a, b = vals[i], vals[j]
            g = math.gcd(a, b)
            vals[i], vals[j] = g, (a // g * b if g else 0)
    return tuple(vals)


def snf(m: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    """Smith invariant factors d1 | d2 | ..., zeros last, length min(rows, cols)."""
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    if nrows == 0 or ncols == 0:
        return ()
    size = min(nrows, ncols)
    if not any(x for row in m for x in row):
        return (0,) * size
    dm = DomainMatrix([[ZZ(int(x)) for x in row] for row in m], (nrows, ncols), ZZ)
    factors = [abs(int(x)) for x in invariant_factors(dm)]
    factors += [0] * (size - len(factors))
    return _divisibility_chain(factors)


def cokernel(generators: Sequence[Sequence[int]], dim: int) -> Tuple[int, ...]:
    """Nontrivial invariant factors of Z^dim / <generators> (0 = free part)."""
    if not generators:
        return (0,) * dim
    factors = list(snf(generators))
    factors += [0] * (dim - len(factors))
    return tuple(d for d in factors if d != 1)


# ============================================================================
# SUBLATTICES
# ============================================================================

def integer_kernel(m: Sequence[Sequence[int]], cols: int) -> IntMatrix:
    """HNF basis of {x in Z^cols : m x = 0}."""
    if not m or not any(any(row) for row in m):
        return identity(cols)
    h, u = hnf(transpose(m))
    kernel = [u[i] for i in range(cols) if not any(h[i])]
    return hnf_basis(kernel)


def saturation(vectors: Sequence[Sequence[int]], dim: int) -> IntMatrix:
    """HNF basis of Z^dim intersected with the linear span of ``vectors``."""
    nonzero = [v for v in vectors if any(v)]
    if not nonzero:
        return ()
    orthogonal = integer_kernel(nonzero, dim)
    if len(orthogonal) == 0:
        return identity(dim)
    return integer_kernel(orthogonal, dim)


def lattice_coordinates(basis: Sequence[Sequence[int]], v: Sequence[int]) -> LatticeVector:
    """Integer coordinates of ``v`` in the lattice basis given by rows."""
    coords = solve_vector(transpose(basis), v)
    if coords is None or any(c.denominator != 1 for c in coords):
        raise ValueError(f"{list(v)} is not in the lattice spanned by {basis}")
    return tuple(int(c) for c in coords)


def random_unimodular(n: int, seed: int, steps: int = 12) -> IntMatrix:
    """Random element of GL(n, Z) built from elementary moves."""
    rng = random.Random(seed)
    u = [list(row) for row in identity(n)]
    for _ in range(steps):
        if n == 1:
            u[0][0] = -u[0][0]
            continue
        i, j = rng.sample(range(n), 2)
        move = rng.random()
        if move < 0.6:
            q = rng.choice((-2, -1, 1, 2))
            u[i] = [a + q * b for a, b in zip(u[i], u[j])]
        elif move < 0.8:
            u[i], u[j] = u[j], u[i]
        else:
            u[i] = [-a for a in u[i]]
    return as_matrix(u)


# ============================================================================
# LATTICE POINT ENUMERATION
# ============================================================================

def linear_form(coeffs: Sequence[int]) -> ppl.Linear_Expression:
    """The linear form sum c_i x_i as a ppl expression."""
    expr = ppl.Linear_Expression(0)
    for i, c in enumerate(coeffs):
        if c:
            expr += c * ppl.Variable(i)
    return expr


@lru_cache(maxsize=512)
def recession_direction(normals: Tuple[LatticeVector, ...], dim: int) -> Optional[LatticeVector]:
    """A nonzero y with <y, a> >= 0 for every normal a, or None if bounded."""
    cone = ppl.C_Polyhedron(dim, "universe")
    variables = [ppl.Variable(i) for i in range(dim)]
    for a in normals:
        cone.add_constraint(linear_form(a) >= 0)
    for gen in cone.minimized_generators():
        if gen.is_ray() or gen.is_line():
            return primitive(tuple(int(gen.coefficient(v)) for v in variables))
    return None


def lattice_points_in(facets: Sequence[Facet], bound_box: Box) -> List[LatticeVector]:
    """All integer points with <x, normal> >= -offset, in lexicographic order.

    The box bounds every coordinate but the last; the last coordinate's range
    is cut from the inequalities directly.
    """
    dim = len(bound_box)
    direction = recession_direction(tuple(tuple(n) for n, _ in facets), dim)
    if direction is not None:
        raise UnboundedRegionError(direction)
    if dim == 0:
        return [()]
    last_lo, last_hi = bound_box[-1]
    ranges = [range(lo, hi + 1) for lo, hi in bound_box[:-1]]
    points: List[LatticeVector] = []
    for prefix in itertools.product(*ranges):
        lo, hi = last_lo, last_hi
        for normal, offset in facets:
            partial = offset
            for a, x in zip(normal, prefix):
                partial += a * x
            a = normal[-1]
            if a > 0:
                lo = max(lo, -(partial // a))
            elif a < 0:
                hi = min(hi, partial // -a)
            elif partial < 0:
                lo, hi = 1, 0
            if lo > hi:
                break
        if lo <= hi:
            points.extend(prefix + (x,) for x in range(lo, hi + 1))
    return points
