"""Exception hierarchy.

Precondition failures are the caller's fault (bad input, wrong dimension,
non-reflexive polytope where reflexivity is required) and map to exit code 2.
Consistency failures mean two independent computations disagreed and map to
exit code 1.
"""
from __future__ import annotations

from typing import Optional, Sequence, Tuple


class ReflexError(Exception):
    """Base class for all toolkit errors."""


class PreconditionError(ReflexError):
    """An operation was called outside its domain."""


class ConsistencyError(ReflexError):
    """Two computations that must agree did not."""


class NotFullDimensionalError(PreconditionError):
    def __init__(self, affine_dim: int, ambient_dim: int) -> None:
        self.affine_dim = affine_dim
        self.ambient_dim = ambient_dim
        super().__init__(
            f"points span an affine space of dimension {affine_dim}, "
            f"not {ambient_dim}: not full-dimensional"
        )


class OriginNotInteriorError(PreconditionError):
    def __init__(self, facet: Optional[Tuple[Tuple[int, ...], int]] = None) -> None:
        self.facet = facet
        detail = f" (facet {facet[0]} has offset {facet[1]})" if facet else ""
        super().__init__(f"origin is not strictly interior{detail}")


class NotReflexiveError(PreconditionError):
    def __init__(self, normal: Tuple[int, ...], offset: int) -> None:
        self.normal = normal
        self.offset = offset
        super().__init__(
            f"facet offset {offset} ≠ 1: not reflexive "
            f"(facet normal {list(normal)}); dual is not a lattice polytope"
        )


class UnboundedRegionError(PreconditionError):
    def __init__(self, direction: Sequence[int]) -> None:
        self.direction = tuple(direction)
        super().__init__(f"inequality system is unbounded along {list(direction)}")


class PointNotInPolytopeError(PreconditionError):
    def __init__(self, point: Sequence[int]) -> None:
        self.point = tuple(point)
        super().__init__(f"point {list(point)} is not in the polytope")


class NewtonPolytopeMismatchError(PreconditionError):
    def __init__(self, missing: Sequence[Tuple[int, ...]], stray: Sequence[Tuple[int, ...]] = ()) -> None:
        self.missing = [tuple(v) for v in missing]
        self.stray = [tuple(v) for v in stray]
        parts = []
        if self.missing:
            parts.append(f"vertices without coefficient: {[list(v) for v in self.missing]}")
        if self.stray:
            parts.append(f"exponents outside the polytope: {[list(v) for v in self.stray]}")
        super().__init__("Newton polytope differs from the polytope; " + "; ".join(parts))


class NotRegularError(PreconditionError):
    def __init__(self, dims: Sequence[int], expected: Sequence[int]) -> None:
        self.dims = list(dims)
        self.expected = list(expected)
        super().__init__(
            f"Laurent polynomial is not regular: Jacobian dimensions {self.dims} "
            f"differ from the delta vector {self.expected}"
        )


class DimensionError(PreconditionError):
    """The polytope has the wrong dimension for the requested formula."""


class FormatError(PreconditionError):
    def __init__(self, path: str, line: int, message: str) -> None:
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")
