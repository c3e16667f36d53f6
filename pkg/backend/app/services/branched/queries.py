"""
Carried-surface queries on branched surfaces.

All queries reduce to the branch equations over sector weights: strictly
positive solutions, extreme rays of the closed homogeneous cone, and
bounded relative systems enumerated box by box.
"""

import logging
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from services.normal import DISK_TYPES, SPHERE, TORUS, NormalVector, SurfaceInfo, surface_info
from utils.cone import extreme_rays
from utils.exact import INFEASIBLE, UNBOUNDED, coordinate_maxima, has_positive_solution
from .model import (
    BRANCH,
    BranchedSurface,
    BranchedSurfaceError,
    MissingEmbeddingError,
    UnboundedSystemError,
    UnknownComponentError,
    sector_of,
    sectors,
)
from .systems import BranchSystem, branch_system, box_solutions, vertical_components

logger = logging.getLogger(__name__)

DEFAULT_BOX_CAP = 6


class CarriedSurface(BaseModel):
    """A carried closed vertex surface with its sector weights."""

    model_config = ConfigDict(frozen=True)

    weights: Tuple[int, ...]
    euler_characteristic: int
    classification: str
    info: Optional[SurfaceInfo] = None

    @property
    def is_sphere(self) -> bool:
        return self.classification == SPHERE

    @property
    def is_torus(self) -> bool:
        return self.classification == TORUS


class RelativeSolution(BaseModel):
    """A carried surface with boundary on vertical boundary components."""

    model_config = ConfigDict(frozen=True)

    components: Tuple[int, ...]
    weights: Tuple[int, ...]
    weight: int


def fully_carries_positive(surface: BranchedSurface) -> bool:
    """Whether the homogeneous branch equations have a strictly positive solution."""
    system = branch_system(surface)
    return has_positive_solution(system.rows, system.variables)


def to_normal_vector(surface: BranchedSurface, weights: Sequence[int]) -> NormalVector:
    """
    Normal coordinates of the surface carried with the given sector weights.

    Raises:
        MissingEmbeddingError: surface has no normal realization
    """
    embedding = surface.embedding
    if embedding is None:
        raise MissingEmbeddingError("branched surface has no normal embedding")
    owner = sector_of(surface)
    coords = [0] * (DISK_TYPES * embedding.triangulation.size)
    for p, disk in enumerate(embedding.polygon_disks):
        if disk is None:
            continue
        t, d = disk
        coords[DISK_TYPES * t + d] += weights[owner[p]]
    return NormalVector(coords=tuple(coords))


def carried_support(surface: BranchedSurface, carried: CarriedSurface) -> List[Tuple[int, int]]:
    """(tetrahedron, disk type) pairs with positive weight in a carried surface."""
    vector = to_normal_vector(surface, carried.weights)
    return [divmod(index, DISK_TYPES) for index, value in enumerate(vector.coords) if value]


def _closed_rays(surface: BranchedSurface) -> Tuple[BranchSystem, List[Tuple[int, ...]]]:
    system = branch_system(surface, closed=True)
    rays = [ray for ray in extreme_rays(system.rows, system.variables) if any(ray)]
    return system, rays


def carried_closed_vertex_surfaces(surface: BranchedSurface) -> List[CarriedSurface]:
    """
    Vertex solutions of the closed homogeneous system, reconstructed as
    normal surfaces and classified.

    Raises:
        MissingEmbeddingError: surface has no normal realization
    """
    if surface.embedding is None:
        raise MissingEmbeddingError("carried vertex surfaces need a normal embedding")
    triangulation = surface.embedding.triangulation
    system, rays = _closed_rays(surface)
    result = []
    for ray in rays:
        info = surface_info(triangulation, to_normal_vector(surface, ray))
        result.append(CarriedSurface(
            weights=ray,
            euler_characteristic=info.euler_characteristic,
            classification=info.classification,
            info=info,
        ))
    flagged = sum(1 for c in result if c.is_sphere or c.is_torus)
    logger.info(f"Carried closed vertex surfaces: {len(result)}, spheres or tori: {flagged}")
    return result


def _abstract_label(chi: int) -> str:
    if chi > 0:
        return SPHERE
    if chi == 0:
        return TORUS
    return f"Other({chi},0)"


def closed_surface_evidence(surface: BranchedSurface) -> List[CarriedSurface]:
    """
    Closed carried vertex surfaces, classified by reconstruction when the
    surface is embedded and by the sign of χ otherwise.
    """
    if surface.embedding is not None:
        return carried_closed_vertex_surfaces(surface)
    system, rays = _closed_rays(surface)
    result = []
    for ray in rays:
        chi = system.euler_characteristic(ray)
        result.append(CarriedSurface(weights=ray, euler_characteristic=chi, classification=_abstract_label(chi)))
    return result


def carries_sphere_or_torus(surface: BranchedSurface) -> bool:
    return any(c.is_sphere or c.is_torus for c in closed_surface_evidence(surface))


def _relative_box(
    surface: BranchedSurface,
    boundary_spec: dict,
    chi: int,
    box_cap: Optional[int],
) -> Tuple[str, List[Tuple[int, ...]], BranchSystem]:
    system = branch_system(surface, boundary_spec, closed=True)
    rows = list(system.rows) + [system.chi]
    rhs = list(system.rhs) + [chi]
    status, maxima = coordinate_maxima(rows, rhs, system.variables)
    if status == INFEASIBLE:
        return status, [], system
    if status == UNBOUNDED and box_cap is None:
        return status, [], system
    bounds = [m if m is not None else box_cap for m in maxima]
    if box_cap is not None:
        bounds = [min(b, box_cap) for b in bounds]
    return status, list(box_solutions(rows, rhs, bounds)), system


def disks_of_contact(surface: BranchedSurface, box_cap: int = DEFAULT_BOX_CAP) -> List[RelativeSolution]:
    """
    Minimal-weight disks of contact, per vertical boundary component.

    For each component the relative system with one boundary circle there
    and χ = 1 is solved; coordinates are capped at box_cap when the region
    is unbounded. Components are reported in order.
    """
    found: List[RelativeSolution] = []
    for component in range(len(vertical_components(surface))):
        status, solutions, system = _relative_box(surface, {component: 1}, 1, box_cap)
        if status == UNBOUNDED:
            logger.warning(f"Disk-of-contact system on component {component} is unbounded; capped at {box_cap}")
        if not solutions:
            continue
        least = min(system.weight(s) for s in solutions)
        for s in solutions:
            if system.weight(s) == least:
                found.append(RelativeSolution(components=(component,), weights=s, weight=least))
    logger.info(f"Found {len(found)} minimal disks of contact")
    return found


def splitting_annuli(surface: BranchedSurface, first: int, second: int) -> List[RelativeSolution]:
    """
    All carried annuli with one boundary circle on each of two distinct
    vertical boundary components.

    Raises:
        BranchedSurfaceError: the two components coincide
        UnknownComponentError: a component does not exist
        UnboundedSystemError: the region is unbounded, so the surface carries
            a closed surface of zero Euler characteristic
    """
    components = vertical_components(surface)
    if first == second:
        raise BranchedSurfaceError("splitting annuli need two distinct vertical boundary components")
    for component in (first, second):
        if not 0 <= component < len(components):
            raise UnknownComponentError(f"no vertical boundary component {component}")
    status, solutions, system = _relative_box(surface, {first: 1, second: 1}, 0, None)
    if status == UNBOUNDED:
        raise UnboundedSystemError(
            f"annulus system between components {first} and {second} is unbounded"
        )
    return [
        RelativeSolution(components=(first, second), weights=s, weight=system.weight(s))
        for s in solutions
    ]


def sink_disks(surface: BranchedSurface) -> List[int]:
    """
    Disk sectors that are the merged side of every branch edge on their
    boundary and touch no free edge.
    """
    result = []
    for index, sector in enumerate(sectors(surface)):
        if not sector.is_disk or not sector.boundary_sides:
            continue
        sink = True
        for p, position in sector.boundary_sides:
            edge = surface.edges[surface.side_edge(p, position)[0]]
            if edge.kind != BRANCH:
                sink = False
                break
            merged = edge.merged
            if (merged.polygon, merged.position) != (p, position):
                sink = False
                break
        if sink:
            result.append(index)
    logger.debug(f"Sink disks: {result}")
    return result
