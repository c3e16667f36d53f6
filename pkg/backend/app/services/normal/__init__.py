"""
Normal surface package.

Standard 7n triangle-quad coordinates, matching equations, admissible
vertex solutions by exact double description, Euler characteristic and
weight, and reconstruction of carried surfaces into classified components.
"""

from .matching import MatchingEquation, MatchingSystem, is_admissible, matching_residual, matching_system
from .solutions import (
    SphereEntry,
    VertexSolutionRecord,
    ZeroEfficiencyReport,
    is_vertex_link,
    normal_tori,
    vertex_link_vectors,
    vertex_solution_records,
    vertex_solutions,
    zero_efficiency_report,
)
from .surfaces import (
    ANNULUS,
    DISK,
    SPHERE,
    TORUS,
    SurfaceInfo,
    classify,
    euler_characteristic,
    reconstruct_components,
    surface_info,
    weight,
)
from .vectors import (
    DISK_TYPES,
    QUAD_PAIRS,
    QUADS,
    TRIANGLES,
    InadmissibleVectorError,
    NormalSurfaceError,
    NormalVector,
    PreconditionError,
    format_normal_vector,
    parse_normal_vector,
    quad_partner,
    quad_type,
)

__all__ = [
    "ANNULUS",
    "DISK",
    "DISK_TYPES",
    "QUAD_PAIRS",
    "QUADS",
    "SPHERE",
    "TORUS",
    "TRIANGLES",
    "InadmissibleVectorError",
    "MatchingEquation",
    "MatchingSystem",
    "NormalSurfaceError",
    "NormalVector",
    "PreconditionError",
    "SphereEntry",
    "SurfaceInfo",
    "VertexSolutionRecord",
    "ZeroEfficiencyReport",
    "classify",
    "euler_characteristic",
    "format_normal_vector",
    "is_admissible",
    "is_vertex_link",
    "matching_residual",
    "matching_system",
    "normal_tori",
    "parse_normal_vector",
    "quad_partner",
    "quad_type",
    "reconstruct_components",
    "surface_info",
    "vertex_link_vectors",
    "vertex_solution_records",
    "vertex_solutions",
    "weight",
    "zero_efficiency_report",
]
