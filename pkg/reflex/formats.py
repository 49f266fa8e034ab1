"""Text formats for polytopes and Laurent polynomials.

Polytope files: first data line ``n v``, then ``v`` lines of ``n`` integers.
Laurent files: first data line ``n t``, then ``t`` lines ``num[/den] e_1 ... e_n``.
``#`` starts a comment, blank lines are ignored.
"""
from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterator, List, Tuple

from .errors import FormatError
from .laurent import LaurentPolynomial
from .polytope import LatticePolytope

POLYTOPE_SUFFIX = ".poly"
LAURENT_SUFFIX = ".laurent"


def _data_lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def _ints(path: str, number: int, fields: List[str]) -> List[int]:
    try:
        return [int(x) for x in fields]
    except ValueError:
        raise FormatError(path, number, f"expected integers, got {' '.join(fields)!r}") from None


def _header(path: str, lines: Iterator[Tuple[int, List[str]]], what: str) -> Tuple[int, int, int]:
    try:
        number, fields = next(lines)
    except StopIteration:
        raise FormatError(path, 1, f"empty file: expected a '{what}' header") from None
    values = _ints(path, number, fields)
    if len(values) != 2 or values[0] < 1 or values[1] < 0:
        raise FormatError(path, number, f"header must be '{what}' with positive dimension")
    return number, values[0], values[1]


def parse_polytope(text: str, path: str = "<string>") -> LatticePolytope:
    lines = _data_lines(text)
    number, n, count = _header(path, lines, "n v")
    points = []
    for number, fields in lines:
        values = _ints(path, number, fields)
        if len(values) != n:
            raise FormatError(path, number, f"vertex has {len(values)} coordinates, expected {n}")
        points.append(tuple(values))
    if len(points) != count:
        raise FormatError(path, number, f"header announces {count} vertices, found {len(points)}")
    return LatticePolytope.from_vertices(points)


def format_polytope(p: LatticePolytope) -> str:
    lines = [f"{p.dim} {len(p.vertices)}"]
    lines.extend(" ".join(str(x) for x in v) for v in p.vertices)
    return "\n".join(lines) + "\n"


def parse_laurent(text: str, path: str = "<string>") -> LaurentPolynomial:
    lines = _data_lines(text)
    number, n, count = _header(path, lines, "n t")
    terms = []
    for number, fields in lines:
        if len(fields) != n + 1:
            raise FormatError(path, number, f"term needs a coefficient and {n} exponents")
        try:
            coeff = Fraction(fields[0])
        except (ValueError, ZeroDivisionError):
            raise FormatError(path, number, f"bad coefficient {fields[0]!r}") from None
        terms.append((tuple(_ints(path, number, fields[1:])), coeff))
    if len(terms) != count:
        raise FormatError(path, number, f"header announces {count} terms, found {len(terms)}")
    return LaurentPolynomial.from_terms(n, terms)


def format_laurent(f: LaurentPolynomial) -> str:
    lines = [f"{f.dim} {len(f.terms)}"]
    lines.extend(
        " ".join([str(c)] + [str(e) for e in m]) for m, c in sorted(f.terms.items())
    )
    return "\n".join(lines) + "\n"


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def load_polytope(path: str) -> LatticePolytope:
    return parse_polytope(_read(path), path)


def load_laurent(path: str) -> LaurentPolynomial:
    return parse_laurent(_read(path), path)


def list_inputs(path: str, suffix: str = POLYTOPE_SUFFIX) -> List[str]:
    """A single file, or every matching file of a directory in sorted order."""
    if os.path.isdir(path):
        return [
            os.path.join(path, name) for name in sorted(os.listdir(path)) if name.endswith(suffix)
        ]
    return [path]
