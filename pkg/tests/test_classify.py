"""Tests for reflexive polygons, weight systems and simplices."""
from collections import Counter
from fractions import Fraction

import pytest

from reflex.errors import DimensionError, PreconditionError
from reflex.classify import (
    WeightSystem,
    check_12,
    classify_polygons,
    enumerate_weight_systems,
    intermediate_lattices,
    simplex_from_weights,
    simplex_matrix_check,
)
from reflex.polytope import count_points, dual
from reflex.reflexive import is_reflexive


@pytest.fixture(scope="module")
def catalog():
    return classify_polygons()


class TestPolygonCatalog:
    """Test the classification of reflexive polygons."""

    def test_sixteen_classes(self, catalog):
        assert len(catalog) == 16

    def test_twelve(self, catalog):
        rows = check_12(catalog)
        assert len(rows) == 16
        assert all(row.ok for row in rows)

    def test_boundary_distribution(self, catalog):
        counts = Counter(entry.boundary for entry in catalog.entries)
        assert counts == {3: 1, 4: 3, 5: 2, 6: 4, 7: 2, 8: 3, 9: 1}

    def test_dual_indices_are_involutive(self, catalog):
        for i, entry in enumerate(catalog.entries):
            assert catalog.entries[entry.dual_index].dual_index == i

    def test_one_interior_point(self, catalog):
        assert all(entry.l_star == 1 for entry in catalog.entries)

    def test_lookup(self, catalog, square, cross_polygon, unimodular):
        i = catalog.index_of(square.transform(unimodular(2, 3)))
        j = catalog.index_of(cross_polygon)
        assert catalog.entries[i].dual_index == j

    def test_to_dict(self, catalog):
        data = catalog.entries[0].to_dict(0)
        assert data["index"] == 0
        assert data["boundary"] == data["l"] - data["l_star"]

    @pytest.mark.slow
    def test_larger_box_finds_nothing_new(self, catalog):
        assert len(classify_polygons(5)) == len(catalog)


class TestWeightSystems:
    """Test unit-fraction weight systems."""

    @pytest.mark.parametrize("n,count", [(1, 1), (2, 3), (3, 14), (4, 147)])
    def test_counts(self, n, count):
        assert len(enumerate_weight_systems(n)) == count

    def test_elliptic_systems(self):
        d_values = [w.d_values for w in enumerate_weight_systems(2)]
        assert d_values == [(2, 3, 6), (2, 4, 4), (3, 3, 3)]

    def test_quintic_weights(self):
        w = WeightSystem((5, 5, 5, 5, 5))
        assert w.weights == (1, 1, 1, 1, 1)
        assert w.d == 5
        assert w.group_order == 125

    def test_from_weights(self):
        w = WeightSystem.from_weights((1, 6, 14, 21))
        assert w.d_values == (2, 3, 7, 42)
        assert w.to_dict()["d"] == 42

    def test_bad_weights(self):
        with pytest.raises(PreconditionError):
            WeightSystem.from_weights((1, 2, 4))

    def test_dimension_range(self):
        with pytest.raises(PreconditionError):
            enumerate_weight_systems(6)


class TestSimplices:
    """Test reflexive simplices built from weights."""

    def test_quintic_simplex(self):
        p = simplex_from_weights(WeightSystem((5, 5, 5, 5, 5)))
        assert count_points(p)[0] == 126

    def test_reflexive(self):
        for w in enumerate_weight_systems(3):
            assert is_reflexive(simplex_from_weights(w))[0]

    def test_matrix(self):
        w = WeightSystem((2, 3, 7, 42))
        check = simplex_matrix_check(simplex_from_weights(w))
        assert check.ok
        assert sorted(check.diagonal) == [1, 2, 6, 41]
        assert sorted(check.weights) == sorted(w.weights)
        assert check.unit_fraction_sum == Fraction(1)

    def test_matrix_on_dual(self):
        check = simplex_matrix_check(dual(simplex_from_weights(WeightSystem((3, 3, 3)))))
        assert check.ok

    def test_needs_simplex(self, cube):
        with pytest.raises(PreconditionError):
            simplex_matrix_check(cube)


class TestIntermediateLattices:
    """Test S(w)-orbits of lattices between M_B(w) and M(w)."""

    @pytest.mark.parametrize("weights,orbits", [((1, 1, 1), 2), ((1, 1, 2), 2), ((1, 2, 3), 1)])
    def test_orbit_counts(self, weights, orbits):
        result = intermediate_lattices(WeightSystem.from_weights(weights))
        assert len(result.orbits) == orbits

    def test_orbits_are_reflexive(self):
        result = intermediate_lattices(WeightSystem.from_weights((1, 1, 1)))
        assert result.group == (3,)
        for orbit in result.orbits:
            assert is_reflexive(orbit.polytope)[0]
        assert sum(o.size for o in result.orbits) == result.subgroup_count

    def test_dimension_cap(self):
        with pytest.raises(DimensionError):
            intermediate_lattices(WeightSystem((5, 5, 5, 5, 5)))
