"""
Vertex normal surfaces and the evidence reports built on them.
"""

import logging
from functools import lru_cache
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict

from services.tri import Triangulation, build_skeleton
from utils.cone import extreme_rays
from .matching import matching_system
from .surfaces import SPHERE, TORUS, SurfaceInfo, reconstruct_components, surface_info
from .vectors import DISK_TYPES, QUADS, NormalVector, PreconditionError, format_normal_vector

logger = logging.getLogger(__name__)


def _quad_conflict(ray: Tuple[int, ...]) -> bool:
    for start in range(0, len(ray), DISK_TYPES):
        if sum(1 for q in QUADS if ray[start + q]) > 1:
            return True
    return False


@lru_cache(maxsize=64)
def vertex_solutions(triangulation: Triangulation) -> Tuple[NormalVector, ...]:
    """
    Admissible vertex solutions of the matching equations.

    Extreme rays of the matching cone are enumerated by double description;
    rays with two quad types in one tetrahedron are dropped as they appear,
    which leaves exactly the admissible extreme rays.

    Returns:
        Coprime vectors in lexicographic order
    """
    system = matching_system(triangulation)
    rays = extreme_rays(system.rows(), system.width, prune=_quad_conflict)
    solutions = tuple(NormalVector(coords=ray) for ray in rays if any(ray))
    logger.info(f"Found {len(solutions)} vertex normal surfaces on {triangulation.size} tetrahedra")
    return solutions


def vertex_link_vectors(triangulation: Triangulation) -> List[NormalVector]:
    """The normal surface linking each vertex class, in vertex class order."""
    skel = build_skeleton(triangulation)
    links = []
    for index in range(len(skel.vertex_reps)):
        corners = [key for key, cls in skel.vertex_of.items() if cls == index]
        links.append(NormalVector.from_support(triangulation.size, corners))
    return links


def is_vertex_link(triangulation: Triangulation, vector: NormalVector) -> bool:
    return vector in vertex_link_vectors(triangulation)


class VertexSolutionRecord(BaseModel):
    """A vertex solution with its topology and vertex-link flag."""

    model_config = ConfigDict(frozen=True)

    vector: str
    info: SurfaceInfo
    vertex_link: bool


def vertex_solution_records(triangulation: Triangulation) -> List[VertexSolutionRecord]:
    links = set(vertex_link_vectors(triangulation))
    return [
        VertexSolutionRecord(
            vector=format_normal_vector(v),
            info=surface_info(triangulation, v),
            vertex_link=v in links,
        )
        for v in vertex_solutions(triangulation)
    ]


class SphereEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    vector: str
    vertex_link: bool


class ZeroEfficiencyReport(BaseModel):
    """
    Vertex-solution spheres of a closed triangulation.

    zero_efficient_evidence is true when every such sphere is a vertex link.
    This is evidence only: non-vertex solutions are not examined.
    """

    model_config = ConfigDict(frozen=True)

    spheres: Tuple[SphereEntry, ...]
    exceptional: int
    zero_efficient_evidence: bool


def _require_closed(triangulation: Triangulation) -> None:
    if not triangulation.is_closed:
        raise PreconditionError("triangulation must be closed")


def zero_efficiency_report(triangulation: Triangulation) -> ZeroEfficiencyReport:
    """
    List every vertex-solution sphere and flag the non-vertex-linking ones.

    Raises:
        PreconditionError: triangulation has boundary
    """
    _require_closed(triangulation)
    links = set(vertex_link_vectors(triangulation))
    entries = []
    for vector in vertex_solutions(triangulation):
        parts = reconstruct_components(triangulation, vector)
        if len(parts) == 1 and parts[0].classification == SPHERE:
            entries.append(SphereEntry(vector=format_normal_vector(vector), vertex_link=vector in links))
    exceptional = sum(1 for entry in entries if not entry.vertex_link)
    if exceptional:
        logger.warning(f"{exceptional} vertex normal spheres are not vertex links")
    return ZeroEfficiencyReport(
        spheres=tuple(entries),
        exceptional=exceptional,
        zero_efficient_evidence=exceptional == 0,
    )


def normal_tori(triangulation: Triangulation) -> List[NormalVector]:
    """
    Vertex solutions carrying a connected torus.

    Raises:
        PreconditionError: triangulation has boundary
    """
    _require_closed(triangulation)
    tori = []
    for vector in vertex_solutions(triangulation):
        parts = reconstruct_components(triangulation, vector)
        if len(parts) == 1 and parts[0].classification == TORUS:
            tori.append(vector)
    logger.info(f"Found {len(tori)} vertex normal tori")
    return tori
