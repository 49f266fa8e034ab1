"""Tests for lattice polytopes, faces and duality."""
import math

import pytest

from reflex.ehrhart import ehrhart
from reflex.errors import (
    NotFullDimensionalError,
    NotReflexiveError,
    OriginNotInteriorError,
    PointNotInPolytopeError,
    PreconditionError,
)
from reflex.polytope import (
    LatticePolytope,
    canonical_form,
    count_points,
    degree,
    dual,
    dual_face,
    faces,
    from_vertices,
    smallest_containing_face,
)


class TestConstruction:
    """Test the exact convex hull."""

    def test_interior_points_dropped(self):
        p = from_vertices([(1, 1), (1, -1), (-1, 1), (-1, -1), (0, 0), (1, 0)])
        assert len(p.vertices) == 4
        assert len(p.facets) == 4

    def test_hull_of_all_lattice_points(self, quintic):
        p = from_vertices(quintic.lattice_points)
        assert p.vertices == quintic.vertices
        assert p.facets == quintic.facets
        assert len(p.facets) == 5

    def test_facets_primitive_with_offsets(self):
        p = from_vertices([(2, 0), (0, 2), (-2, -2)])
        assert sorted(p.offsets) == [2, 2, 2]
        for normal, _ in p.facets:
            assert math.gcd(*normal) == 1

    def test_cross_polygon_facets(self, cross_polygon):
        assert sorted(cross_polygon.facets) == [
            ((-1, -1), 1), ((-1, 1), 1), ((1, -1), 1), ((1, 1), 1),
        ]

    def test_duplicates_dropped(self, delta3):
        p = from_vertices(list(delta3.vertices) + [delta3.vertices[0]] * 4)
        assert p == delta3

    def test_vertices_sorted(self, square):
        assert list(square.vertices) == sorted(square.vertices)

    def test_not_full_dimensional(self):
        with pytest.raises(NotFullDimensionalError) as info:
            from_vertices([(0, 0), (1, 1), (2, 2)])
        assert info.value.affine_dim == 1

    def test_empty(self):
        with pytest.raises(PreconditionError):
            from_vertices([])

    def test_facet_offsets(self, cube):
        assert cube.facet_offsets() == (1,) * 6
        assert cube.has_interior_origin()

    def test_transform_keeps_counts(self, cube, unimodular):
        image = cube.transform(unimodular(3, 1))
        assert count_points(image) == count_points(cube)


class TestLatticePoints:
    """Test point counts of polytopes and faces."""

    def test_counts(self, cube, octahedron, delta2):
        assert count_points(cube) == (27, 1)
        assert count_points(octahedron) == (7, 1)
        assert count_points(delta2) == (4, 1)

    def test_boundary(self, square):
        assert len(square.boundary_points()) == 8
        assert square.interior_points() == [(0, 0)]

    def test_face_points(self, cube):
        facet = cube.faces(2)[0]
        l, l_star = count_points(facet)
        assert (l, l_star) == (9, 1)


class TestFaces:
    """Test the face lattice."""

    def test_f_vectors(self, cube, octahedron, quintic):
        assert cube.face_numbers() == (8, 12, 6)
        assert octahedron.face_numbers() == (6, 12, 8)
        assert quintic.face_numbers() == (5, 10, 10, 5)

    def test_module_level_faces(self, cube):
        assert faces(cube, 1) == cube.faces(1)

    def test_bad_dimension(self, cube):
        with pytest.raises(PreconditionError):
            cube.faces(4)

    def test_local_vertices(self, cube):
        facet = cube.faces(2)[0]
        local = facet.local_vertices()
        assert len(local) == 4
        assert all(len(v) == 2 for v in local)

    def test_labels(self, cube):
        assert cube.faces(1)[3].label == "1:3"
        assert cube.faces(1)[3].codim == 2


class TestDegree:
    """Test normalized volumes of faces."""

    def test_vertex_degree_is_undefined(self, cube):
        with pytest.raises(PreconditionError):
            degree(cube.faces(0)[0])

    def test_segment(self):
        assert degree(from_vertices([(0,), (5,)])) == 5

    def test_pick_matches_leading_coefficient(self, random_polygons):
        for p in random_polygons:
            assert degree(p) == 2 * ehrhart(p).coefficients[-1]

    def test_edges(self, cube, octahedron):
        assert all(degree(e) == 2 for e in cube.faces(1))
        assert all(degree(e) == 1 for e in octahedron.faces(1))

    def test_polygons(self, delta2, square):
        assert degree(delta2) == 3
        assert degree(square) == 8

    def test_three_dimensional(self, cube, octahedron):
        assert degree(cube) == 48
        assert degree(octahedron) == 8


class TestDuality:
    """Test polar duality and face pairing."""

    def test_cube_octahedron(self, cube, octahedron):
        assert dual(cube) == octahedron
        assert dual(octahedron) == cube

    def test_involution(self, small_reflexive):
        for p in small_reflexive:
            assert dual(dual(p)) == p

    def test_not_reflexive(self, delta2):
        doubled = from_vertices([(2 * x, 2 * y) for x, y in delta2.vertices])
        with pytest.raises(NotReflexiveError) as info:
            dual(doubled)
        assert "facet offset 2" in str(info.value)

    def test_origin_on_boundary(self):
        with pytest.raises(OriginNotInteriorError):
            dual(from_vertices([(0, 0), (1, 0), (0, 1)]))

    def test_dual_face_dimensions(self, cube):
        for d in range(3):
            for face in cube.faces(d):
                assert dual_face(cube, face).dim == 2 - d

    def test_dual_face_of_polytope(self, cube):
        with pytest.raises(PreconditionError):
            dual_face(cube, cube.as_face())


class TestSmallestFace:
    """Test the smallest face containing a point."""

    def test_origin(self, cube):
        face, codim = smallest_containing_face(cube, (0, 0, 0))
        assert codim == 0
        assert face.dim == 3

    def test_vertex(self, cube):
        _, codim = smallest_containing_face(cube, (1, 1, 1))
        assert codim == 3

    def test_edge_midpoint(self, cube):
        face, codim = smallest_containing_face(cube, (1, 1, 0))
        assert (face.dim, codim) == (1, 2)

    def test_outside(self, cube):
        with pytest.raises(PointNotInPolytopeError):
            smallest_containing_face(cube, (2, 0, 0))


class TestCanonicalForm:
    """Test the GL(n, Z) normal form."""

    def test_invariance(self, delta2, square, cube, unimodular):
        for p in (delta2, square, cube):
            for seed in range(3):
                assert canonical_form(p.transform(unimodular(p.dim, seed))) == canonical_form(p)

    def test_distinguishes(self, square, cross_polygon):
        assert canonical_form(square) != canonical_form(cross_polygon)

    def test_translation_free_equivalence(self):
        a = LatticePolytope.from_vertices([(1, 0), (0, 1), (-1, -1)])
        b = LatticePolytope.from_vertices([(-1, 0), (0, -1), (1, 1)])
        assert canonical_form(a) == canonical_form(b)
