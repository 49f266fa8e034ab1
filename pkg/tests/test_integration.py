"""End-to-end checks across several modules."""
import io
import json
import math

import pytest

from reflex.cli import run
from reflex.ehrhart import check_reciprocity, delta_vector
from reflex.jacobian import find_regular, jacobian_report
from reflex.laurent import SupportKind
from reflex.periods import extended_check, fit_recurrence, pi0
from reflex.polytope import count_points, dual
from reflex.reflexive import check_24, hodge_report, is_reflexive


pytestmark = pytest.mark.integration


class TestMirrorPairs:
    """Invariants of a reflexive pair computed from either side."""

    def test_quintic_swap(self, quintic, quintic_mirror):
        a, b = hodge_report(quintic), hodge_report(quintic_mirror)
        assert (a.h11, a.h_n21, a.euler) == (1, 101, -200)
        assert (b.h11, b.h_n21, b.euler) == (101, 1, 200)

    def test_p2xp2_through_cli(self, p2xp2, write_polytope):
        small, _ = p2xp2
        stream = io.StringIO()
        assert run(["hodge", write_polytope(small)], stream=stream) == 0
        report = json.loads(stream.getvalue())
        assert (report["h11"], report["h_n21"], report["euler"]) == (83, 2, 162)

    def test_duals_are_reflexive(self, small_reflexive):
        for p in small_reflexive:
            assert count_points(dual(p))[1] == 1
            assert is_reflexive(dual(p))[0]


class TestCorpusProperties:
    """Properties that hold across transformed copies of the corpus."""

    def test_ehrhart_under_transforms(self, small_reflexive, unimodular):
        for p in small_reflexive:
            image = p.transform(unimodular(p.dim, p.dim))
            assert delta_vector(image) == delta_vector(p)
            assert check_reciprocity(image, 2).passed

    def test_24_under_transforms(self, cube, octahedron, unimodular):
        for p in (cube, octahedron):
            for seed in range(2):
                assert check_24(p.transform(unimodular(3, seed))) == 24


class TestPeriodsToRecurrence:
    """From a polytope to a validated recurrence."""

    def test_triangle(self, delta2):
        series = pi0(delta2, 63)
        rec = fit_recurrence(series)
        assert rec.polys == ((0, 0, 1), (-6, 27, -27))
        assert extended_check(delta2, rec, series)

    def test_quintic_mirror_coefficients(self, quintic_mirror):
        series = pi0(quintic_mirror, 15)
        assert series.compressed() == tuple(
            math.factorial(5 * k) // math.factorial(k) ** 5 for k in range(4)
        )


class TestJacobianAgainstDelta:
    """Jacobian dimensions follow the delta vector."""

    def test_cube(self, cube):
        f, _ = find_regular(cube, seed=3, support=SupportKind.VERTICES)
        report = jacobian_report(cube, f)
        assert report.dims_R[:-1] == delta_vector(cube).psi
        assert report.dims_D == delta_vector(cube).phi


class TestClassificationThroughCli:
    """The polygon catalog as the command line reports it."""

    def test_catalog_lines(self):
        stream = io.StringIO()
        assert run(["classify2d", "--format", "jsonl"], stream=stream) == 0
        entries = [json.loads(line) for line in stream.getvalue().splitlines()]
        assert len(entries) == 16
        for entry in entries:
            assert entry["boundary"] + entries[entry["dual_index"]]["boundary"] == 12
