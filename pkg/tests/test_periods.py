"""Tests for period series, recurrence fitting and the Hasse test."""
import math
from fractions import Fraction

import pytest

from reflex.errors import NotReflexiveError, PreconditionError
from reflex.laurent import LaurentPolynomial, dwork_family
from reflex.periods import (
    Recurrence,
    extended_check,
    fit_recurrence,
    hasse_constant_term,
    pi0,
)
from reflex.polytope import from_vertices


def multinomial_terms(parts, count):
    """(parts·k)! / (k!)^parts for k = 0..count-1."""
    return [math.factorial(parts * k) // math.factorial(k) ** parts for k in range(count)]


class TestPeriodSeries:
    """Test constant terms of powers of the boundary sum."""

    def test_segment(self, segment):
        series = pi0(segment, 10)
        assert series.coefficients[::2] == tuple(math.comb(2 * k, k) for k in range(6))
        assert all(b == 0 for b in series.coefficients[1::2])

    def test_triangle(self, delta2):
        series = pi0(delta2, 12)
        assert series.compressed() == tuple(multinomial_terms(3, 5))
        assert series.compression_step == 3

    def test_quintic_mirror(self, quintic_mirror):
        series = pi0(quintic_mirror, 10)
        assert series.coefficients[5] == 120
        assert series.coefficients[10] == math.factorial(10) // 2 ** 5
        assert series.compression_step == 5

    def test_matches_oracle(self, square, cross_polygon, brute_force_pi0):
        for p in (square, cross_polygon):
            assert list(pi0(p, 5).coefficients) == brute_force_pi0(p.boundary_points(), 5)

    def test_first_coefficient(self, cube):
        assert pi0(cube, 0).coefficients == (1,)

    def test_needs_reflexive(self):
        with pytest.raises(NotReflexiveError):
            pi0(from_vertices([(2, 0), (0, 2), (-2, -2)]), 4)

    def test_negative_kmax(self, square):
        with pytest.raises(PreconditionError):
            pi0(square, -1)

    def test_to_dict(self, segment):
        data = pi0(segment, 4).to_dict()
        assert data["coefficients"] == ["1", "0", "2", "0", "6"]
        assert data["compression_step"] == 2

    def test_record_fields(self, segment):
        data = pi0(segment, 4).to_dict()
        assert {"polytope", "kmax", "coefficients", "compression_step", "recurrence"} <= set(data)
        assert data["kmax"] == 4
        assert data["recurrence"] is None
        assert data["polytope"]["dim"] == 1

    def test_record_with_recurrence(self, segment):
        series = pi0(segment, 42)
        data = series.to_dict(fit_recurrence(series))
        assert data["recurrence"]["polys"] == [["0", "1"], ["2", "-4"]]

    def test_quintic_mirror_compressed(self, quintic_mirror):
        series = pi0(quintic_mirror, 30)
        assert series.compressed() == tuple(multinomial_terms(5, 7))

    @pytest.mark.slow
    def test_pruned_sums_match_oracle(self, oracle_reflexive, brute_force_pi0):
        for p in oracle_reflexive:
            assert list(pi0(p, 8).coefficients) == brute_force_pi0(p.boundary_points(), 8)

    def test_invariant_under_unimodular_maps(self, small_reflexive, unimodular):
        for p in small_reflexive:
            image = p.transform(unimodular(p.dim, 5))
            assert pi0(image, 6).coefficients == pi0(p, 6).coefficients


class TestRecurrence:
    """Test the recurrence data type."""

    def test_annihilates(self):
        rec = Recurrence(1, 1, ((0, 1), (2, -4)))
        values = [math.comb(2 * k, k) for k in range(12)]
        assert rec.annihilates(values)
        assert not rec.annihilates([1, 2, 3, 4])

    def test_strings(self):
        rec = Recurrence(1, 1, ((0, 1), (2, -4)))
        assert rec.as_strings() == ["k", "-4*k + 2"]
        assert rec.to_dict()["polys"] == [["0", "1"], ["2", "-4"]]


class TestFitRecurrence:
    """Test recurrence discovery with held-out validation."""

    def test_central_binomials(self, segment):
        series = pi0(segment, 42)
        rec = fit_recurrence(series)
        assert rec.polys == ((0, 1), (2, -4))

    def test_constant(self):
        rec = fit_recurrence([1] * 22)
        assert (rec.order, rec.degree) == (1, 0)
        assert rec.polys == ((1,), (-1,))

    def test_quintic(self):
        rec = fit_recurrence(multinomial_terms(5, 24))
        assert (rec.order, rec.degree) == (1, 4)
        assert rec.polys[0] == (0, 0, 0, 0, 1)
        assert rec.polys[1] == (-120, 1250, -4375, 6250, -3125)

    def test_leading_coefficient_positive(self):
        rec = fit_recurrence(multinomial_terms(3, 22))
        assert rec.polys[0][-1] > 0
        assert math.gcd(*(c for poly in rec.polys for c in poly)) == 1

    def test_no_recurrence(self):
        values = [2 ** (k * k) for k in range(22)]
        assert fit_recurrence(values) is None

    def test_too_few_values(self):
        with pytest.raises(PreconditionError):
            fit_recurrence([1] * 10)

    def test_small_holdout(self):
        with pytest.raises(PreconditionError):
            fit_recurrence([1] * 30, holdout=2)

    def test_held_out_rows_select_combination(self):
        # zero training rows leave a 4-dimensional solution space at shape (1, 1)
        values = (0,) * 7 + (1,) * 5
        rec = fit_recurrence(values, max_order=1, max_degree=1)
        assert (rec.order, rec.degree) == (1, 1)
        assert rec.polys == ((-7, 1), (7, -1))
        assert rec.annihilates(values)

    @pytest.mark.slow
    def test_quintic_mirror_series(self, quintic_mirror):
        series = pi0(quintic_mirror, 75)
        rec = fit_recurrence(series, max_order=1, max_degree=4)
        assert rec.polys[0] == (0, 0, 0, 0, 1)
        assert rec.polys[1] == (-120, 1250, -4375, 6250, -3125)

    def test_extended_check(self, segment):
        series = pi0(segment, 42)
        rec = fit_recurrence(series)
        assert extended_check(segment, rec, series)


class TestHasse:
    """Test the constant term of f^{p-1} mod p."""

    def test_segment(self):
        f = LaurentPolynomial.from_terms(1, {(1,): 1, (-1,): 1})
        assert hasse_constant_term(f, 5) == 1
        assert hasse_constant_term(f, 7) == 6

    def test_elliptic_curve(self):
        f = dwork_family(2, 0)
        assert hasse_constant_term(f, 5) == 0
        assert hasse_constant_term(f, 7) == 90 % 7

    def test_not_prime(self):
        with pytest.raises(PreconditionError):
            hasse_constant_term(dwork_family(2, 0), 9)

    def test_prime_too_large(self):
        with pytest.raises(PreconditionError):
            hasse_constant_term(dwork_family(2, 0), 211)

    def test_rational_coefficients(self):
        with pytest.raises(PreconditionError):
            hasse_constant_term(dwork_family(2, Fraction(1, 2)), 5)

    def test_non_reflexive_newton_polytope(self):
        f = LaurentPolynomial.from_terms(1, {(2,): 1, (-2,): 1})
        with pytest.raises(PreconditionError):
            hasse_constant_term(f, 5)
