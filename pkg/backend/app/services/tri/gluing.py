"""
Gluing tables for triangulated 3-manifolds.

Defines the immutable Triangulation value, the vertex permutation helpers,
and the parser/serializer for the gluing-table text format:

    line 1      number of tetrahedra n
    n lines     four entries each, "bdry" or "t:f:perm"

perm is a string over "0123" of length 4 where perm[i] is the image of
vertex i. Lines starting with '#' are comments.
"""

import logging
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

logger = logging.getLogger(__name__)

Perm = Tuple[int, int, int, int]

IDENTITY: Perm = (0, 1, 2, 3)
BOUNDARY_TOKEN = "bdry"


class TriangulationError(Exception):
    """Base exception for triangulation errors."""
    pass


class TriangulationParseError(TriangulationError):
    """Raised when a gluing table cannot be parsed."""

    def __init__(self, line_number: int, reason: str):
        self.line_number = line_number
        self.reason = reason
        super().__init__(f"line {line_number}: {reason}")


def perm_from_string(text: str) -> Perm:
    if len(text) != 4 or sorted(text) != ["0", "1", "2", "3"]:
        raise ValueError(f"not a permutation of 0123: {text!r}")
    return tuple(int(ch) for ch in text)  # type: ignore[return-value]


def perm_to_string(perm: Perm) -> str:
    return "".join(str(x) for x in perm)


def perm_inverse(perm: Perm) -> Perm:
    inverse = [0, 0, 0, 0]
    for source, target in enumerate(perm):
        inverse[target] = source
    return tuple(inverse)  # type: ignore[return-value]


def perm_compose(outer: Perm, inner: Perm) -> Perm:
    """(outer ∘ inner)(i) = outer[inner[i]]."""
    return tuple(outer[inner[i]] for i in range(4))  # type: ignore[return-value]


def perm_sign(perm: Perm) -> int:
    sign = 1
    seen = [False] * 4
    for start in range(4):
        if seen[start]:
            continue
        length = 0
        current = start
        while not seen[current]:
            seen[current] = True
            current = perm[current]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class Gluing(BaseModel):
    """Face (tet, face) glued to (tetrahedron, face) through perm."""

    model_config = ConfigDict(frozen=True)

    tetrahedron: int
    face: int
    perm: Perm


class Triangulation(BaseModel):
    """
    A triangulated compact 3-manifold given by its face gluings.

    gluings[t][f] is None for a boundary face, otherwise the Gluing of
    face f of tetrahedron t. Values are immutable and hashable so derived
    data (skeleton, links, automorphisms) can be cached per instance.
    """

    model_config = ConfigDict(frozen=True)

    size: int
    gluings: Tuple[Tuple[Optional[Gluing], ...], ...]

    def glued(self, tet: int, face: int) -> Optional[Gluing]:
        return self.gluings[tet][face]

    @property
    def is_closed(self) -> bool:
        return all(g is not None for row in self.gluings for g in row)


def _check_structure(size: int, gluings: List[List[Optional[Gluing]]], line_of: List[int]) -> None:
    """Enforce the involution, vertex-mapping and no-self-face invariants."""
    for tet in range(size):
        for face in range(4):
            gluing = gluings[tet][face]
            if gluing is None:
                continue
            line = line_of[tet]
            if not 0 <= gluing.tetrahedron < size:
                raise TriangulationParseError(line, f"tetrahedron index {gluing.tetrahedron} out of range")
            if not 0 <= gluing.face < 4:
                raise TriangulationParseError(line, f"face index {gluing.face} out of range")
            if gluing.tetrahedron == tet and gluing.face == face:
                raise TriangulationParseError(line, f"face {face} of tetrahedron {tet} glued to itself")
            if gluing.perm[face] != gluing.face:
                raise TriangulationParseError(
                    line, f"permutation {perm_to_string(gluing.perm)} does not send face {face} to face {gluing.face}"
                )
            partner = gluings[gluing.tetrahedron][gluing.face]
            expected = perm_inverse(gluing.perm)
            if partner is None or partner.tetrahedron != tet or partner.face != face or partner.perm != expected:
                raise TriangulationParseError(
                    line, f"gluing of face {face} of tetrahedron {tet} is not involutive"
                )


def _parse_entry(token: str, line_number: int) -> Optional[Gluing]:
    if token == BOUNDARY_TOKEN:
        return None
    parts = token.split(":")
    if len(parts) != 3:
        raise TriangulationParseError(line_number, f"malformed entry {token!r}")
    try:
        tet = int(parts[0])
        face = int(parts[1])
    except ValueError:
        raise TriangulationParseError(line_number, f"malformed entry {token!r}")
    try:
        perm = perm_from_string(parts[2])
    except ValueError:
        raise TriangulationParseError(line_number, f"non-permutation string {parts[2]!r}")
    return Gluing(tetrahedron=tet, face=face, perm=perm)


def parse_triangulation(text: str) -> Triangulation:
    """
    Parse a gluing table.

    Args:
        text: gluing-table document

    Returns:
        Triangulation: validated immutable triangulation

    Raises:
        TriangulationParseError: malformed line, index out of range,
            non-permutation, self-glued face or non-involutive gluing
    """
    lines = [
        (number, raw.strip())
        for number, raw in enumerate(text.splitlines(), start=1)
        if raw.strip() and not raw.strip().startswith("#")
    ]
    if not lines:
        raise TriangulationParseError(1, "empty document")

    header_line, header = lines[0]
    try:
        size = int(header)
    except ValueError:
        raise TriangulationParseError(header_line, f"expected tetrahedron count, got {header!r}")
    if size < 0:
        raise TriangulationParseError(header_line, "negative tetrahedron count")

    body = lines[1:]
    if len(body) != size:
        line = body[size][0] if len(body) > size else (body[-1][0] if body else header_line)
        raise TriangulationParseError(line, f"expected {size} gluing lines, found {len(body)}")

    gluings: List[List[Optional[Gluing]]] = []
    line_of: List[int] = []
    for line_number, content in body:
        tokens = content.split()
        if len(tokens) != 4:
            raise TriangulationParseError(line_number, f"expected 4 entries, found {len(tokens)}")
        gluings.append([_parse_entry(token, line_number) for token in tokens])
        line_of.append(line_number)

    _check_structure(size, gluings, line_of)
    triangulation = Triangulation(size=size, gluings=tuple(tuple(row) for row in gluings))
    logger.debug(f"Parsed triangulation with {size} tetrahedra")
    return triangulation


def serialize_triangulation(triangulation: Triangulation) -> str:
    """Canonical rendering: no comments, single spaces, trailing newline."""
    lines = [str(triangulation.size)]
    for row in triangulation.gluings:
        entries = [
            BOUNDARY_TOKEN if g is None else f"{g.tetrahedron}:{g.face}:{perm_to_string(g.perm)}"
            for g in row
        ]
        lines.append(" ".join(entries))
    return "\n".join(lines) + "\n"


def from_gluing_list(size: int, entries: List[Tuple[int, int, int, int, str]]) -> Triangulation:
    """
    Build a triangulation from one-sided gluing records (t, f, t', f', perm).

    The reverse gluing is filled in automatically.
    """
    table: List[List[Optional[Gluing]]] = [[None] * 4 for _ in range(size)]
    for tet, face, other, other_face, perm_text in entries:
        perm = perm_from_string(perm_text)
        table[tet][face] = Gluing(tetrahedron=other, face=other_face, perm=perm)
        table[other][other_face] = Gluing(tetrahedron=tet, face=face, perm=perm_inverse(perm))
    _check_structure(size, table, [0] * size)
    return Triangulation(size=size, gluings=tuple(tuple(row) for row in table))
