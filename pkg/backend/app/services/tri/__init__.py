"""
Triangulation package.

Parses gluing tables into immutable Triangulation values and exposes the
identified skeleton, vertex links, orientability and automorphisms used by
the normal surface and branched surface packages.

Usage:
    from services.tri import parse_triangulation, validate

    triangulation = parse_triangulation(text)
    report = validate(triangulation)
"""

from .gluing import (
    BOUNDARY_TOKEN,
    IDENTITY,
    Gluing,
    Perm,
    Triangulation,
    TriangulationError,
    TriangulationParseError,
    from_gluing_list,
    parse_triangulation,
    perm_compose,
    perm_from_string,
    perm_inverse,
    perm_sign,
    perm_to_string,
    serialize_triangulation,
)
from .skeleton import (
    EDGES,
    Skeleton,
    VertexLink,
    automorphisms,
    build_skeleton,
    edge_index,
    face_vertices,
    skeleton,
    vertex_links,
)
from .validation import ValidationReport, is_orientable, orientation_signs, validate

__all__ = [
    "BOUNDARY_TOKEN",
    "IDENTITY",
    "EDGES",
    "Gluing",
    "Perm",
    "Skeleton",
    "Triangulation",
    "TriangulationError",
    "TriangulationParseError",
    "ValidationReport",
    "VertexLink",
    "automorphisms",
    "build_skeleton",
    "edge_index",
    "face_vertices",
    "from_gluing_list",
    "is_orientable",
    "orientation_signs",
    "parse_triangulation",
    "perm_compose",
    "perm_from_string",
    "perm_inverse",
    "perm_sign",
    "perm_to_string",
    "serialize_triangulation",
    "skeleton",
    "validate",
    "vertex_links",
]
