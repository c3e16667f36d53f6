"""
Cell structure of a branched surface, its pared locus and symmetries.
"""

import logging
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from services.branched.model import BranchedSurface, Corner
from services.branched.systems import component_of, vertical_components
from .complex import DegenerateSurfaceError, SplittingComplex

logger = logging.getLogger(__name__)


class CellStructure(BaseModel):
    """
    Polygons, edges and vertices of B with corner incidence.

    max_incidence bounds how many cells one complex cell reaches through
    its corners, itself included, and how many cells meet at one vertex.
    """

    model_config = ConfigDict(frozen=True)

    zero_cells: int
    one_cells: int
    two_cells: int
    corners_at: Tuple[Tuple[Corner, ...], ...]
    max_incidence: int

    @property
    def total(self) -> int:
        return self.zero_cells + self.one_cells + self.two_cells


class PairedCircle(BaseModel):
    model_config = ConfigDict(frozen=True)

    component: int
    edges: Tuple[int, ...]
    vertices: Tuple[int, ...]


class PairedLocus(BaseModel):
    """Core circles of the vertical boundary, one per component."""

    model_config = ConfigDict(frozen=True)

    circles: Tuple[PairedCircle, ...]

    @property
    def zero_cells(self) -> int:
        return sum(len(c.vertices) for c in self.circles)

    @property
    def one_cells(self) -> int:
        return sum(len(c.edges) for c in self.circles)


class SurfaceSymmetry(BaseModel):
    """
    Switch-preserving automorphism of B.

    polygons[P] = (image, rotation): side i of P goes to side
    (i + rotation) mod n of the image. edges[e] = (image, sign).
    """

    model_config = ConfigDict(frozen=True)

    polygons: Tuple[Tuple[int, int], ...]
    edges: Tuple[Tuple[int, int], ...]

    @property
    def is_identity(self) -> bool:
        return all(p == q and r == 0 for q, (p, r) in enumerate(self.polygons))


@lru_cache(maxsize=128)
def cell_structure(surface: BranchedSurface) -> CellStructure:
    """
    Raises:
        DegenerateSurfaceError: the branch locus is empty
    """
    if not surface.branch_edges():
        raise DegenerateSurfaceError("branch locus is empty; the surface has no vertical boundary")
    corners: List[List[Corner]] = [[] for _ in range(surface.vertex_count)]
    for p, polygon in enumerate(surface.polygons):
        for c in range(polygon.size):
            corners[surface.corner_vertex(p, c)].append((p, c))
    at_vertex = max(len(group) for group in corners)
    through_cell = max(
        1 + sum(len(corners[surface.corner_vertex(p, c)]) - 1 for c in range(polygon.size))
        for p, polygon in enumerate(surface.polygons)
    )
    structure = CellStructure(
        zero_cells=surface.vertex_count,
        one_cells=len(surface.edges),
        two_cells=len(surface.polygons),
        corners_at=tuple(tuple(group) for group in corners),
        max_incidence=max(at_vertex, through_cell),
    )
    logger.debug(f"Cell structure: {structure.total} cells, r = {structure.max_incidence}")
    return structure


@lru_cache(maxsize=128)
def pared_locus(surface: BranchedSurface) -> PairedLocus:
    circles = []
    for k, members in enumerate(vertical_components(surface)):
        vertices = sorted({v for e in members for v in surface.edge_ends[e]})
        circles.append(PairedCircle(component=k, edges=members, vertices=tuple(vertices)))
    return PairedLocus(circles=tuple(circles))


def _side_signature(surface: BranchedSurface, p: int, i: int) -> Tuple[str, int, bool]:
    e = surface.side_edge(p, i)[0]
    edge = surface.edges[e]
    for role, side in enumerate(edge.sides):
        if (side.polygon, side.position) == (p, i):
            return edge.kind, role, side.flip
    raise DegenerateSurfaceError(f"side {p}.{i} is not on its edge")


def _extend(
    surface: BranchedSurface,
    polygons: List[Optional[Tuple[int, int]]],
    edges: List[Optional[Tuple[int, int]]],
    start: int,
    image: int,
    rotation: int,
) -> bool:
    """Propagate P -> (image, rotation) through shared edges; False on conflict."""
    queue = [(start, image, rotation)]
    used = {q for q, _ in (x for x in polygons if x is not None)}
    while queue:
        p, q, rot = queue.pop()
        if polygons[p] is not None:
            if polygons[p] != (q, rot):
                return False
            continue
        if q in used or surface.polygons[q].size != surface.polygons[p].size:
            return False
        polygons[p] = (q, rot)
        used.add(q)
        n = surface.polygons[p].size
        for i in range(n):
            j = (i + rot) % n
            e, o = surface.side_edge(p, i)
            f, o2 = surface.side_edge(q, j)
            if _side_signature(surface, p, i) != _side_signature(surface, q, j):
                return False
            sign = o * o2
            if edges[e] is None:
                edges[e] = (f, sign)
            elif edges[e] != (f, sign):
                return False
            source, target = surface.edges[e], surface.edges[f]
            for side, mirror in zip(source.sides, target.sides):
                offset = (mirror.position - side.position) % surface.polygons[side.polygon].size
                queue.append((side.polygon, mirror.polygon, offset))
    return True


@lru_cache(maxsize=128)
def symmetries(surface: BranchedSurface) -> Tuple[SurfaceSymmetry, ...]:
    """All switch-preserving automorphisms, identity first."""
    found: List[SurfaceSymmetry] = []
    count = len(surface.polygons)

    def search(polygons, edges) -> None:
        pending = next((p for p in range(count) if polygons[p] is None), None)
        if pending is None:
            found.append(SurfaceSymmetry(polygons=tuple(polygons), edges=tuple(edges)))
            return
        taken = {x[0] for x in polygons if x is not None}
        for q in range(count):
            if q in taken:
                continue
            for rot in range(surface.polygons[pending].size):
                trial_polygons, trial_edges = list(polygons), list(edges)
                if _extend(surface, trial_polygons, trial_edges, pending, q, rot):
                    search(trial_polygons, trial_edges)

    search([None] * count, [None] * len(surface.edges))
    found.sort(key=lambda s: (not s.is_identity, s.polygons))
    logger.debug(f"Found {len(found)} symmetries of the branched surface")
    return tuple(found)


def transform_complex(
    surface: BranchedSurface, symmetry: SurfaceSymmetry, complex_: SplittingComplex
) -> SplittingComplex:
    """Image of a complex under a symmetry of its surface."""
    counts = [0] * len(complex_.counts)
    for p, n in enumerate(complex_.counts):
        counts[symmetry.polygons[p][0]] = n

    def slot(s):
        p, j, i = s
        q, rot = symmetry.polygons[p]
        return q, j, (i + rot) % surface.polygons[p].size

    membership = component_of(surface)
    members = vertical_components(surface)
    pinned = tuple(membership[symmetry.edges[members[k][0]][0]] for k in complex_.pinned)
    return SplittingComplex(
        counts=tuple(counts),
        pairs=tuple((slot(a), slot(b)) for a, b in complex_.pairs),
        pins=tuple((slot(a), symmetry.edges[e][0]) for a, e in complex_.pins),
        pinned=pinned,
    ).canonical()


def least_code(surface: BranchedSurface, complex_: SplittingComplex) -> Tuple:
    return min(transform_complex(surface, s, complex_).code() for s in symmetries(surface))


def is_canonical(surface: BranchedSurface, complex_: SplittingComplex) -> bool:
    """Whether a complex is the least-code member of its symmetry orbit."""
    code = complex_.code()
    return all(transform_complex(surface, s, complex_).code() >= code for s in symmetries(surface)[1:])
