"""
Branched surface data model.

A branched surface is stored as a 2-complex of polygons glued along edges.
Every edge carries a switch:

    free     one polygon side; the edge lies on the boundary of B
    smooth   two polygon sides continuing one sheet
    branch   three sides (merged, smooth, cusp); the merged side is the
             one-sheet side and carries w(smooth) + w(cusp)

Each side also records whether the polygon's vertical order is reversed
relative to the fiber over the edge. Along that fiber the smooth sheets
lie below the cusp sheets, and the vertical boundary sits between them.

Vertices are derived from polygon boundaries. Every vertex keeps a fiber
cut: a set of polygon corners that every carried sheet over the vertex
crosses exactly once, which makes the Euler characteristic of carried
surfaces a linear functional of sector weights.
"""

import logging
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from services.tri import Triangulation
from utils.helpers import DisjointSet

logger = logging.getLogger(__name__)

FREE = "free"
SMOOTH = "smooth"
BRANCH = "branch"

SWITCH_SIZES = {FREE: 1, SMOOTH: 2, BRANCH: 3}

ORIGIN_NORMAL = "normal"
ORIGIN_TEXT = "text"
ORIGIN_SPLIT = "split"

Corner = Tuple[int, int]


class BranchedSurfaceError(Exception):
    """Base exception for branched surface errors."""
    pass


class MalformedBranchedSurfaceError(BranchedSurfaceError):
    """Raised when polygons and switches do not describe a branched surface."""
    pass


class MissingEmbeddingError(BranchedSurfaceError):
    """Raised when an operation needs the normal realization."""
    pass


class UnknownComponentError(BranchedSurfaceError):
    """Raised when a vertical boundary component does not exist."""
    pass


class UnboundedSystemError(BranchedSurfaceError):
    """Raised when a relative system that must be bounded is not."""
    pass


class SelectionError(BranchedSurfaceError):
    """Raised for inadmissible or non-closed disk-type selections."""
    pass


class ProvenanceError(BranchedSurfaceError):
    """Raised when a branched surface lacks the lineage an operation requires."""
    pass


class SideRef(BaseModel):
    """Side `position` of polygon `polygon`; flip reverses its vertical order."""

    model_config = ConfigDict(frozen=True)

    polygon: int
    position: int
    flip: bool = False


class Edge(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: str
    sides: Tuple[SideRef, ...]

    @property
    def merged(self) -> SideRef:
        return self.sides[0]

    @property
    def smooth(self) -> SideRef:
        return self.sides[1]

    @property
    def cusp(self) -> SideRef:
        return self.sides[2]


class Polygon(BaseModel):
    """Boundary as (edge id, +1/-1) pairs; corner i is the start of side i."""

    model_config = ConfigDict(frozen=True)

    boundary: Tuple[Tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.boundary)


class NormalEmbedding(BaseModel):
    """
    Normal realization of a branched surface built from disk types.

    polygon_disks[P] is the (tetrahedron, disk type) of polygon P, or None
    for a strip bigon. branch_origins lists (edge, tetrahedron, face, arc
    type) for the two-disk side of every branch edge.
    """

    model_config = ConfigDict(frozen=True)

    triangulation: Triangulation
    selection: Tuple[Tuple[int, ...], ...]
    polygon_disks: Tuple[Optional[Tuple[int, int]], ...]
    branch_origins: Tuple[Tuple[int, int, int, int], ...]
    arc_edges: Tuple[Tuple[Tuple[int, int], Tuple[int, ...]], ...] = ()


class BranchedSurface(BaseModel):
    """Immutable branched surface with derived vertices and fiber cuts."""

    model_config = ConfigDict(frozen=True)

    polygons: Tuple[Polygon, ...]
    edges: Tuple[Edge, ...]
    edge_ends: Tuple[Tuple[int, int], ...]
    vertex_count: int
    cuts: Tuple[Tuple[Corner, ...], ...]
    embedding: Optional[NormalEmbedding] = None
    origin: str = ORIGIN_TEXT
    filter_passed: bool = False
    parents: Tuple[int, ...] = ()

    def side_edge(self, polygon: int, position: int) -> Tuple[int, int]:
        return self.polygons[polygon].boundary[position]

    def corner_vertex(self, polygon: int, corner: int) -> int:
        edge, orientation = self.polygons[polygon].boundary[corner]
        tail, head = self.edge_ends[edge]
        return tail if orientation > 0 else head

    def branch_edges(self) -> List[int]:
        return [i for i, e in enumerate(self.edges) if e.kind == BRANCH]

    def free_edges(self) -> List[int]:
        return [i for i, e in enumerate(self.edges) if e.kind == FREE]

    def with_flags(self, **updates) -> "BranchedSurface":
        return self.model_copy(update=updates)


def _end_tokens(boundary: Tuple[Tuple[int, int], ...], position: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """(start token, end token) of a side as (edge, 0 tail / 1 head)."""
    edge, orientation = boundary[position]
    if orientation > 0:
        return (edge, 0), (edge, 1)
    return (edge, 1), (edge, 0)


def _check(polygons: Sequence[Polygon], edges: Sequence[Edge]) -> None:
    seen: Dict[Tuple[int, int], int] = {}
    for index, edge in enumerate(edges):
        if edge.kind not in SWITCH_SIZES:
            raise MalformedBranchedSurfaceError(f"edge {index}: unknown switch kind {edge.kind!r}")
        if len(edge.sides) != SWITCH_SIZES[edge.kind]:
            raise MalformedBranchedSurfaceError(
                f"edge {index}: {edge.kind} switch needs {SWITCH_SIZES[edge.kind]} sides"
            )
        for side in edge.sides:
            if not 0 <= side.polygon < len(polygons):
                raise MalformedBranchedSurfaceError(f"edge {index}: unknown polygon {side.polygon}")
            polygon = polygons[side.polygon]
            if not 0 <= side.position < polygon.size:
                raise MalformedBranchedSurfaceError(f"edge {index}: polygon {side.polygon} has no side {side.position}")
            if polygon.boundary[side.position][0] != index:
                raise MalformedBranchedSurfaceError(
                    f"edge {index}: side {side.polygon}.{side.position} lies on edge {polygon.boundary[side.position][0]}"
                )
            key = (side.polygon, side.position)
            if key in seen:
                raise MalformedBranchedSurfaceError(f"side {side.polygon}.{side.position} used twice")
            seen[key] = index
    for p, polygon in enumerate(polygons):
        if polygon.size == 0:
            raise MalformedBranchedSurfaceError(f"polygon {p} has no sides")
        for position, (edge, orientation) in enumerate(polygon.boundary):
            if orientation not in (1, -1):
                raise MalformedBranchedSurfaceError(f"polygon {p}: orientation must be +1 or -1")
            if (p, position) not in seen:
                raise MalformedBranchedSurfaceError(f"side {p}.{position} is not attached to any switch")


def _default_cut(
    polygons: Sequence[Polygon], edges: Sequence[Edge], corners: List[Corner]
) -> Tuple[Corner, ...]:
    """Pick one corner whose polygon is the merged side of an adjacent branch edge."""
    for polygon, corner in corners:
        boundary = polygons[polygon].boundary
        previous = (corner - 1) % len(boundary)
        for position in (corner, previous):
            edge = edges[boundary[position][0]]
            if edge.kind == BRANCH and (edge.merged.polygon, edge.merged.position) == (polygon, position):
                return ((polygon, corner),)
    return (corners[0],)


def assemble(
    polygons: Sequence[Polygon],
    edges: Sequence[Edge],
    cut_hints: Sequence[Sequence[Corner]] = (),
    embedding: Optional[NormalEmbedding] = None,
    origin: str = ORIGIN_TEXT,
    parents: Sequence[int] = (),
) -> BranchedSurface:
    """
    Validate cells and switches, derive vertices and fiber cuts.

    Args:
        polygons: polygon boundaries
        edges: switches, one per edge id
        cut_hints: corner lists; each becomes the fiber cut of the vertex
            its corners lie on
        embedding: optional normal realization
        origin: lineage tag
        parents: for split results, the parent polygon of each polygon
            (-1 for strips)

    Raises:
        MalformedBranchedSurfaceError: inconsistent sides or switches
    """
    polygons = tuple(polygons)
    edges = tuple(edges)
    _check(polygons, edges)

    ends: DisjointSet = DisjointSet()
    for e in range(len(edges)):
        ends.add((e, 0))
        ends.add((e, 1))
    for polygon in polygons:
        m = polygon.size
        for position in range(m):
            _, end = _end_tokens(polygon.boundary, position)
            start, _ = _end_tokens(polygon.boundary, (position + 1) % m)
            ends.union(end, start)

    index = ends.index_map()
    vertex_count = len(set(index.values()))
    edge_ends = tuple((index[(e, 0)], index[(e, 1)]) for e in range(len(edges)))

    corners_at: Dict[int, List[Corner]] = {}
    for p, polygon in enumerate(polygons):
        for corner in range(polygon.size):
            start, _ = _end_tokens(polygon.boundary, corner)
            corners_at.setdefault(index[start], []).append((p, corner))

    cuts: List[Optional[Tuple[Corner, ...]]] = [None] * vertex_count
    for hint in cut_hints:
        if not hint:
            continue
        p, corner = hint[0]
        start, _ = _end_tokens(polygons[p].boundary, corner)
        cuts[index[start]] = tuple(sorted(hint))
    for vertex in range(vertex_count):
        if cuts[vertex] is None:
            cuts[vertex] = _default_cut(polygons, edges, corners_at[vertex])

    surface = BranchedSurface(
        polygons=polygons,
        edges=edges,
        edge_ends=edge_ends,
        vertex_count=vertex_count,
        cuts=tuple(cuts),
        embedding=embedding,
        origin=origin,
        parents=tuple(parents),
    )
    logger.debug(
        f"Assembled branched surface: {len(polygons)} polygons, {len(edges)} edges, {vertex_count} vertices"
    )
    return surface


class Sector(BaseModel):
    """Component of B minus its branch locus, closed up along branch and free edges."""

    model_config = ConfigDict(frozen=True)

    polygons: Tuple[int, ...]
    euler_characteristic: int
    boundary_curves: int
    boundary_sides: Tuple[Tuple[int, int], ...]

    @property
    def is_disk(self) -> bool:
        return self.euler_characteristic == 1 and self.boundary_curves == 1

    @property
    def cells(self) -> int:
        return len(self.polygons)


@lru_cache(maxsize=256)
def sectors(surface: BranchedSurface) -> Tuple[Sector, ...]:
    """Sectors ordered by their smallest polygon."""
    groups: DisjointSet = DisjointSet(range(len(surface.polygons)))
    for edge in surface.edges:
        if edge.kind == SMOOTH:
            groups.union(edge.sides[0].polygon, edge.sides[1].polygon)

    result = []
    for members in groups.classes():
        member_set = set(members)
        corners: DisjointSet = DisjointSet()
        for p in members:
            for c in range(surface.polygons[p].size):
                corners.add((p, c))
        interior_edges = set()
        boundary_sides = []
        for p in members:
            polygon = surface.polygons[p]
            m = polygon.size
            for position, (e, _) in enumerate(polygon.boundary):
                edge = surface.edges[e]
                if edge.kind == SMOOTH:
                    interior_edges.add(e)
                else:
                    boundary_sides.append((p, position))
        # glue corners across smooth edges: tail to tail, head to head
        for e in interior_edges:
            first, second = surface.edges[e].sides
            ends = []
            for side in (first, second):
                m = surface.polygons[side.polygon].size
                orientation = surface.polygons[side.polygon].boundary[side.position][1]
                start, end = (side.polygon, side.position), (side.polygon, (side.position + 1) % m)
                ends.append((start, end) if orientation > 0 else (end, start))
            corners.union(ends[0][0], ends[1][0])
            corners.union(ends[0][1], ends[1][1])

        vertices = len(corners.classes())
        chi = vertices - (len(interior_edges) + len(boundary_sides)) + len(member_set)
        curves: DisjointSet = DisjointSet()
        for p, position in boundary_sides:
            m = surface.polygons[p].size
            curves.union(corners.find((p, position)), corners.find((p, (position + 1) % m)))
        result.append(Sector(
            polygons=tuple(members),
            euler_characteristic=chi,
            boundary_curves=len(curves.classes()),
            boundary_sides=tuple(boundary_sides),
        ))
    return tuple(result)


@lru_cache(maxsize=256)
def sector_of(surface: BranchedSurface) -> Tuple[int, ...]:
    """Sector index of every polygon."""
    mapping = [0] * len(surface.polygons)
    for index, sector in enumerate(sectors(surface)):
        for p in sector.polygons:
            mapping[p] = index
    return tuple(mapping)
