"""
Normal coordinates.

A NormalVector holds 7 nonnegative integers per tetrahedron: triangle types
0-3 (the triangle cutting off vertex k) followed by quad types 4-6.
"""

import logging
from typing import Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, field_validator

logger = logging.getLogger(__name__)

DISK_TYPES = 7
TRIANGLES = (0, 1, 2, 3)
QUADS = (4, 5, 6)

# quad type -> its two vertex pairs
QUAD_PAIRS = {
    4: ((0, 1), (2, 3)),
    5: ((0, 2), (1, 3)),
    6: ((0, 3), (1, 2)),
}


class NormalSurfaceError(Exception):
    """Base exception for normal surface errors."""
    pass


class InadmissibleVectorError(NormalSurfaceError):
    """Raised when an operation needs an admissible normal vector."""
    pass


class PreconditionError(NormalSurfaceError):
    """Raised when the triangulation does not meet an operation's precondition."""
    pass


def quad_type(a: int, b: int) -> int:
    """Quad type separating the pair {a, b} from the other two vertices."""
    low, high = min(a, b), max(a, b)
    for quad, pairs in QUAD_PAIRS.items():
        if (low, high) in pairs:
            return quad
    raise ValueError(f"not a vertex pair: {a}, {b}")


def quad_partner(quad: int, vertex: int) -> int:
    """The vertex paired with `vertex` by the given quad type."""
    for a, b in QUAD_PAIRS[quad]:
        if vertex == a:
            return b
        if vertex == b:
            return a
    raise ValueError(f"vertex {vertex} not in quad {quad}")


def separates(quad: int, a: int, b: int) -> bool:
    """Whether quads of this type cross the edge (a, b)."""
    return quad_type(a, b) != quad


def coordinate(tet: int, disk_type: int) -> int:
    return DISK_TYPES * tet + disk_type


class NormalVector(BaseModel):
    """Standard triangle-quad coordinates of a normal surface."""

    model_config = ConfigDict(frozen=True)

    coords: Tuple[int, ...]

    @field_validator("coords")
    @classmethod
    def _check_coords(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(value) % DISK_TYPES != 0:
            raise ValueError(f"coordinate count {len(value)} is not a multiple of {DISK_TYPES}")
        if any(x < 0 for x in value):
            raise ValueError("normal coordinates must be nonnegative")
        return value

    @classmethod
    def zero(cls, tetrahedra: int) -> "NormalVector":
        return cls(coords=(0,) * (DISK_TYPES * tetrahedra))

    @classmethod
    def from_support(cls, tetrahedra: int, support: Iterable[Tuple[int, int]]) -> "NormalVector":
        values = [0] * (DISK_TYPES * tetrahedra)
        for tet, disk_type in support:
            values[coordinate(tet, disk_type)] += 1
        return cls(coords=tuple(values))

    @property
    def tetrahedra(self) -> int:
        return len(self.coords) // DISK_TYPES

    def get(self, tet: int, disk_type: int) -> int:
        return self.coords[coordinate(tet, disk_type)]

    def block(self, tet: int) -> Tuple[int, ...]:
        return self.coords[DISK_TYPES * tet: DISK_TYPES * (tet + 1)]

    def quad_in(self, tet: int) -> Optional[int]:
        """The unique nonzero quad type of a tetrahedron, if any."""
        present = [q for q in QUADS if self.get(tet, q)]
        return present[0] if len(present) == 1 else None

    def is_quad_compatible(self) -> bool:
        return all(sum(1 for q in QUADS if self.get(t, q)) <= 1 for t in range(self.tetrahedra))

    def support(self) -> List[Tuple[int, int]]:
        return [divmod(i, DISK_TYPES) for i, x in enumerate(self.coords) if x]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "NormalVector") -> "NormalVector":
        return NormalVector(coords=tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scaled(self, factor: int) -> "NormalVector":
        return NormalVector(coords=tuple(factor * x for x in self.coords))


def format_normal_vector(vector: NormalVector) -> str:
    return ",".join(str(x) for x in vector.coords)


def parse_normal_vector(text: str) -> NormalVector:
    """
    Parse the comma-separated text form.

    Raises:
        ValueError: non-integer entries or wrong coordinate count
    """
    entries = [part.strip() for part in text.strip().split(",")] if text.strip() else []
    try:
        values = tuple(int(part) for part in entries)
    except ValueError:
        raise ValueError(f"malformed normal vector {text!r}")
    return NormalVector(coords=values)
