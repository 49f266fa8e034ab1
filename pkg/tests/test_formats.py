"""Tests for the polytope and Laurent text formats."""
from fractions import Fraction

import pytest

from reflex.errors import FormatError
from reflex.formats import (
    format_laurent,
    format_polytope,
    list_inputs,
    load_laurent,
    load_polytope,
    parse_laurent,
    parse_polytope,
)
from reflex.laurent import dwork_family

TRIANGLE = """\
# the reflexive triangle
2 3
1 0
0 1   # second vertex

-1 -1
"""


class TestPolytopeFormat:
    """Test parsing and writing polytope files."""

    def test_parse(self, delta2):
        assert parse_polytope(TRIANGLE) == delta2

    def test_writer_output_is_stable(self, cube):
        text = format_polytope(cube)
        assert format_polytope(parse_polytope(text)) == text

    def test_header(self, delta2):
        assert format_polytope(delta2).splitlines()[0] == "2 3"

    def test_bad_coordinate_count(self):
        with pytest.raises(FormatError) as info:
            parse_polytope("2 3\n1 0\n0 1\n-1\n", "bad.poly")
        assert info.value.line == 4
        assert str(info.value).startswith("bad.poly:4:")

    def test_vertex_count_mismatch(self):
        with pytest.raises(FormatError):
            parse_polytope("2 4\n1 0\n0 1\n-1 -1\n")

    def test_not_integers(self):
        with pytest.raises(FormatError) as info:
            parse_polytope("2 1\n1 x\n")
        assert info.value.line == 2

    def test_empty(self):
        with pytest.raises(FormatError) as info:
            parse_polytope("# nothing here\n")
        assert info.value.line == 1

    def test_load(self, tmp_path, delta2):
        path = tmp_path / "triangle.poly"
        path.write_text(TRIANGLE, encoding="utf-8")
        assert load_polytope(str(path)) == delta2


class TestLaurentFormat:
    """Test parsing and writing Laurent polynomial files."""

    def test_parse(self):
        f = parse_laurent("2 4\n1 1 0\n1 0 1\n1 -1 -1\n-3/2 0 0\n")
        assert f.terms == dwork_family(2, Fraction(3, 2)).terms

    def test_writer_output_is_stable(self):
        text = format_laurent(dwork_family(3, 4))
        assert format_laurent(parse_laurent(text)) == text

    def test_bad_coefficient(self):
        with pytest.raises(FormatError) as info:
            parse_laurent("1 1\n1/0 1\n")
        assert info.value.line == 2

    def test_missing_exponent(self):
        with pytest.raises(FormatError):
            parse_laurent("2 1\n1 1\n")

    def test_load(self, write_laurent):
        f = dwork_family(1, 2)
        assert load_laurent(write_laurent(f)).terms == f.terms


class TestListInputs:
    """Test batch input discovery."""

    def test_directory_sorted(self, tmp_path, write_polytope, square, cube):
        write_polytope(square, "b.poly")
        write_polytope(cube, "a.poly")
        (tmp_path / "notes.txt").write_text("skip", encoding="utf-8")
        names = [p.rsplit("/", 1)[-1] for p in list_inputs(str(tmp_path))]
        assert names == ["a.poly", "b.poly"]

    def test_single_file(self, write_polytope, square):
        path = write_polytope(square)
        assert list_inputs(path) == [path]
