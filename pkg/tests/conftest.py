"""Pytest configuration and shared fixtures for all tests.

This module provides:
- The standard polytope corpus (segment through the quintic pair)
- Seeded random corpora and unimodular transforms
- A brute-force constant-term oracle for period series
- File writers for the text formats
"""
import itertools
import random
from collections import Counter

import pytest

from reflex.formats import format_laurent, format_polytope
from reflex.lattice_core import random_unimodular
from reflex.polytope import LatticePolytope, dual


def unit(i, n):
    return tuple(1 if j == i else 0 for j in range(n))


def simplex_points(n):
    """e_1, ..., e_n and -(e_1 + ... + e_n)."""
    return [unit(i, n) for i in range(n)] + [tuple([-1] * n)]


# ============================================================================
# POLYTOPE CORPUS
# ============================================================================

@pytest.fixture
def segment():
    return LatticePolytope.from_vertices([(-1,), (1,)])


@pytest.fixture
def square():
    return LatticePolytope.from_vertices([(1, 1), (1, -1), (-1, 1), (-1, -1)])


@pytest.fixture
def cross_polygon():
    return LatticePolytope.from_vertices([(1, 0), (0, 1), (-1, 0), (0, -1)])


@pytest.fixture
def cube():
    return LatticePolytope.from_vertices(list(itertools.product((-1, 1), repeat=3)))


@pytest.fixture
def octahedron():
    return LatticePolytope.from_vertices([unit(i, 3) for i in range(3)] + [tuple(-x for x in unit(i, 3)) for i in range(3)])


@pytest.fixture
def delta2():
    """The reflexive triangle of P^2."""
    return LatticePolytope.from_vertices(simplex_points(2))


@pytest.fixture
def delta3():
    return LatticePolytope.from_vertices(simplex_points(3))


@pytest.fixture(scope="session")
def quintic_mirror():
    """Δ4*: the simplex e_1..e_4, -(e_1+...+e_4)."""
    return LatticePolytope.from_vertices(simplex_points(4))


@pytest.fixture(scope="session")
def quintic(quintic_mirror):
    """Δ4: the Newton polytope of the quintic, with 126 lattice points."""
    return dual(quintic_mirror)


@pytest.fixture(scope="session")
def p2xp2():
    """Δ = conv(A_1..A_6) for P^2 x P^2, and its dual."""
    small = LatticePolytope.from_vertices([
        (1, 0, 0, 0), (0, 1, 0, 0), (-1, -1, 0, 0),
        (0, 0, 1, 0), (0, 0, 0, 1), (0, 0, -1, -1),
    ])
    return small, dual(small)


@pytest.fixture
def small_reflexive(segment, square, cross_polygon, delta2, cube, octahedron, delta3):
    """Reflexive polytopes cheap enough for exhaustive checks."""
    return [segment, square, cross_polygon, delta2, cube, octahedron, delta3]


@pytest.fixture
def hexagon():
    return LatticePolytope.from_vertices([(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)])


@pytest.fixture
def oracle_reflexive(small_reflexive, hexagon, delta2, delta3):
    """Ten reflexive polytopes for checking period series against direct expansion."""
    return small_reflexive + [hexagon, dual(delta2), dual(delta3)]


@pytest.fixture(scope="session")
def hypercube4():
    """[-1, 1]^4; its anticanonical hypersurface has h11 = 4 and h21 = 68."""
    return LatticePolytope.from_vertices(list(itertools.product((-1, 1), repeat=4)))


# ============================================================================
# RANDOM CORPORA
# ============================================================================

@pytest.fixture
def random_polygons():
    """Seeded lattice polygons containing the origin in their interior."""
    rng = random.Random(7)
    polygons = []
    while len(polygons) < 24:
        points = [(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(5)]
        points += [(2, 0), (0, 2), (-2, -2)]
        p = LatticePolytope.from_vertices(points)
        if p.has_interior_origin():
            polygons.append(p)
    return polygons


@pytest.fixture
def random_polytopes_3d():
    rng = random.Random(11)
    return [
        LatticePolytope.from_vertices(
            [(rng.randint(-2, 2), rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(5)]
            + simplex_points(3)
        )
        for _ in range(16)
    ]


@pytest.fixture(scope="session")
def random_polytopes_4d():
    """Small seeded 4-polytopes around the reflexive simplex."""
    rng = random.Random(13)
    return [
        LatticePolytope.from_vertices(
            [tuple(rng.randint(-1, 1) for _ in range(4)) for _ in range(4)] + simplex_points(4)
        )
        for _ in range(12)
    ]


@pytest.fixture
def unimodular():
    """Factory: seeded GL(n, Z) matrices."""
    def make(n, seed):
        return random_unimodular(n, seed)
    return make


# ============================================================================
# ORACLES
# ============================================================================

@pytest.fixture
def brute_force_pi0():
    """Constant terms of (Σ X^m)^i by expanding the power term by term, unpruned."""
    def oracle(points, kmax):
        origin = tuple([0] * len(points[0]))
        power = Counter({origin: 1})
        values = [1]
        for _ in range(kmax):
            grown = Counter()
            for e, count in power.items():
                for m in points:
                    grown[tuple(a + b for a, b in zip(e, m))] += count
            power = grown
            values.append(power[origin])
        return values
    return oracle


# ============================================================================
# FILES
# ============================================================================

@pytest.fixture
def write_polytope(tmp_path):
    """Factory: write a polytope file and return its path as a string."""
    def write(p, name="input.poly", directory=None):
        path = (directory or tmp_path) / name
        path.write_text(format_polytope(p), encoding="utf-8")
        return str(path)
    return write


@pytest.fixture
def write_laurent(tmp_path):
    def write(f, name="input.laurent"):
        path = tmp_path / name
        path.write_text(format_laurent(f), encoding="utf-8")
        return str(path)
    return write
