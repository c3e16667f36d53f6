"""
Matching equations.

For an interior face class with sides (t, f) and (t', f') glued by p, the
normal arcs cutting off vertex v in face f of t must match those cutting
off p[v] in face f' of t'. The arc count on one side is

    x[t, triangle v] + x[t, quad({v, f})]
"""

import logging
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict

from services.tri import Triangulation, build_skeleton, face_vertices
from .vectors import DISK_TYPES, NormalVector, coordinate, quad_type

logger = logging.getLogger(__name__)


class MatchingEquation(BaseModel):
    """One matching equation: sparse integer coefficients over 7n coordinates."""

    model_config = ConfigDict(frozen=True)

    face_class: int
    arc_type: int
    coefficients: Tuple[Tuple[int, int], ...]

    def dense(self, width: int) -> List[int]:
        row = [0] * width
        for index, value in self.coefficients:
            row[index] = value
        return row

    def evaluate(self, vector: NormalVector) -> int:
        return sum(value * vector.coords[index] for index, value in self.coefficients)


class MatchingSystem(BaseModel):
    """Matching equations in face-class order, then arc type 0-2."""

    model_config = ConfigDict(frozen=True)

    width: int
    equations: Tuple[MatchingEquation, ...]

    def rows(self) -> List[List[int]]:
        return [eq.dense(self.width) for eq in self.equations]


def arc_terms(tet: int, face: int, vertex: int) -> Tuple[int, int]:
    """Coordinates contributing arcs that cut off `vertex` in face `face` of `tet`."""
    return coordinate(tet, vertex), coordinate(tet, quad_type(vertex, face))


def matching_system(triangulation: Triangulation) -> MatchingSystem:
    """
    Build the matching equations of a triangulation.

    Args:
        triangulation: parsed triangulation

    Returns:
        MatchingSystem: three equations per interior face class
    """
    skel = build_skeleton(triangulation)
    equations = []
    for face_class, sides in enumerate(skel.face_sides):
        if len(sides) != 2:
            continue
        tet, face = sides[0]
        gluing = triangulation.glued(tet, face)
        p = gluing.perm
        for arc_type, vertex in enumerate(face_vertices(face)):
            coefficients: Dict[int, int] = {}
            for index in arc_terms(tet, face, vertex):
                coefficients[index] = coefficients.get(index, 0) + 1
            for index in arc_terms(gluing.tetrahedron, gluing.face, p[vertex]):
                coefficients[index] = coefficients.get(index, 0) - 1
            equations.append(MatchingEquation(
                face_class=face_class,
                arc_type=arc_type,
                coefficients=tuple(sorted((i, c) for i, c in coefficients.items() if c != 0)),
            ))
    system = MatchingSystem(width=DISK_TYPES * triangulation.size, equations=tuple(equations))
    logger.debug(f"Matching system: {len(equations)} equations over {system.width} coordinates")
    return system


def matching_residual(triangulation: Triangulation, vector: NormalVector) -> List[int]:
    """Value of every matching equation at the vector; all zero iff it matches."""
    return [eq.evaluate(vector) for eq in matching_system(triangulation).equations]


def is_admissible(triangulation: Triangulation, vector: NormalVector) -> bool:
    """Quad-compatible and satisfying every matching equation."""
    if vector.tetrahedra != triangulation.size:
        return False
    return vector.is_quad_compatible() and not any(matching_residual(triangulation, vector))
