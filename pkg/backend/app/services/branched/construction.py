"""
Candidate branched surfaces built from normal disk types.

Every selected disk type becomes one polygon; disks sharing a normal arc
type on a face are identified along that arc. The number of disks on each
side of a face decides the switch:

    1-1    smooth edge
    2-1    branch edge; the lone disk is merged, the quad is smooth and
           the triangle is the cusp
    2-2    a bigon strip between two branch edges, one per side

The fiber over an arc points toward the vertex the arc cuts off, so the
triangle of a two-disk side lies above the quad.
"""

import logging
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, ConfigDict

from services.normal import QUAD_PAIRS, QUADS, PreconditionError, quad_partner, quad_type
from services.tri import Perm, Triangulation, automorphisms, build_skeleton, edge_index
from .model import (
    BRANCH,
    FREE,
    ORIGIN_NORMAL,
    SMOOTH,
    BranchedSurface,
    Corner,
    Edge,
    NormalEmbedding,
    Polygon,
    SelectionError,
    SideRef,
    assemble,
)

logger = logging.getLogger(__name__)

Selection = Tuple[Tuple[int, ...], ...]


class DiskSelection(BaseModel):
    """Disk types chosen in each tetrahedron."""

    model_config = ConfigDict(frozen=True)

    types: Selection

    @classmethod
    def of(cls, types: Iterable[Iterable[int]]) -> "DiskSelection":
        return cls(types=tuple(tuple(sorted(set(block))) for block in types))

    def quads(self, tet: int) -> List[int]:
        return [d for d in self.types[tet] if d in QUADS]

    @property
    def is_admissible(self) -> bool:
        return all(
            all(0 <= d < 7 for d in block) and len(self.quads(t)) <= 1
            for t, block in enumerate(self.types)
        )

    def contains(self, other: "DiskSelection") -> bool:
        return all(set(b) <= set(a) for a, b in zip(self.types, other.types))

    def size(self) -> int:
        return sum(len(block) for block in self.types)


def format_selection(selection: DiskSelection) -> str:
    """Text form "0:0,1,2,3;1:4" with one entry per tetrahedron."""
    return ";".join(f"{t}:{','.join(str(d) for d in block)}" for t, block in enumerate(selection.types))


def parse_selection(text: str) -> DiskSelection:
    """
    Parse the text form written by format_selection.

    Raises:
        SelectionError: malformed entries or tetrahedra out of order
    """
    text = text.strip()
    if not text:
        return DiskSelection(types=())
    blocks = []
    for expected, entry in enumerate(text.split(";")):
        head, sep, body = entry.partition(":")
        if not sep or head.strip() != str(expected):
            raise SelectionError(f"malformed selection entry {entry!r}")
        try:
            blocks.append([int(x) for x in body.split(",") if x.strip()])
        except ValueError:
            raise SelectionError(f"malformed disk type in {entry!r}")
    return DiskSelection.of(blocks)


def disk_corners(disk_type: int) -> List[Tuple[int, int]]:
    if disk_type < 4:
        return [(disk_type, w) for w in range(4) if w != disk_type]
    (a, b), (c, d) = QUAD_PAIRS[disk_type]
    return [(a, c), (c, b), (b, d), (d, a)]


class DiskSide:
    """One side of one disk polygon inside its tetrahedron."""

    def __init__(self, polygon: int, position: int, tet: int, disk_type: int, start: int, end: int, arc_type: int):
        self.polygon = polygon
        self.position = position
        self.tet = tet
        self.disk_type = disk_type
        self.start = start
        self.end = end
        self.arc_type = arc_type
        self.face = ({0, 1, 2, 3} - {arc_type, start, end}).pop()

    @property
    def is_quad(self) -> bool:
        return self.disk_type >= 4

    @property
    def flip(self) -> bool:
        # disk layers count away from the cut-off vertex (triangles) or from
        # the side holding vertex 0 (quads); the fiber points toward arc_type
        if not self.is_quad:
            return True
        return 0 in (self.arc_type, self.face)


def disk_sides(polygon: int, tet: int, disk_type: int) -> List[DiskSide]:
    corners = disk_corners(disk_type)
    sides = []
    for i in range(len(corners)):
        first, second = corners[i], corners[(i + 1) % len(corners)]
        shared = (set(first) & set(second)).pop()
        start = first[0] if first[1] == shared else first[1]
        end = second[0] if second[1] == shared else second[1]
        sides.append(DiskSide(polygon, i, tet, disk_type, start, end, shared))
    return sides


def face_representative(triangulation: Triangulation, face_sides, face_of, tet: int, face: int) -> Tuple[int, Perm]:
    """Face class of (tet, face) and the vertex map onto its representative side."""
    index = face_of[(tet, face)]
    if face_sides[index][0] == (tet, face):
        return index, (0, 1, 2, 3)
    return index, triangulation.glued(tet, face).perm


def _check_selection(triangulation: Triangulation, selection: DiskSelection) -> None:
    if len(selection.types) != triangulation.size:
        raise SelectionError(
            f"selection covers {len(selection.types)} tetrahedra, triangulation has {triangulation.size}"
        )
    if not selection.is_admissible:
        raise SelectionError("selection is not admissible: at most one quad type per tetrahedron")


def _arc_disks(selection: DiskSelection, tet: int, face: int, arc_type: int) -> List[int]:
    """Selected disks of one tetrahedron with an arc of the given type on a face."""
    found = [d for d in selection.types[tet] if d == arc_type]
    found += [q for q in selection.quads(tet) if quad_partner(q, face) == arc_type]
    return found


def from_disk_types(triangulation: Triangulation, selection: DiskSelection) -> BranchedSurface:
    """
    Identify the selected normal disk types into a branched surface.

    Args:
        triangulation: ambient triangulation
        selection: disk types per tetrahedron

    Returns:
        BranchedSurface with origin "normal" and its NormalEmbedding

    Raises:
        SelectionError: inadmissible selection, or an arc type present on
            one side of an interior face but not the other
    """
    _check_selection(triangulation, selection)
    skel = build_skeleton(triangulation)

    disks = [(t, d) for t, block in enumerate(selection.types) for d in block]
    sides: List[DiskSide] = []
    for p, (t, d) in enumerate(disks):
        sides.extend(disk_sides(p, t, d))

    # (face class, arc type on the representative side) -> sides on each face side
    groups: Dict[Tuple[int, int], Tuple[List[DiskSide], List[DiskSide]]] = {}
    orientation: Dict[Tuple[int, int], int] = {}
    free_sides: List[DiskSide] = []
    for side in sides:
        if triangulation.glued(side.tet, side.face) is None:
            free_sides.append(side)
            orientation[(side.polygon, side.position)] = 1
            continue
        index, to_rep = face_representative(triangulation, skel.face_sides, skel.face_of, side.tet, side.face)
        key = (index, to_rep[side.arc_type])
        bucket = groups.setdefault(key, ([], []))
        on_rep = skel.face_sides[index][0] == (side.tet, side.face)
        bucket[0 if on_rep else 1].append(side)
        orientation[(side.polygon, side.position)] = 1 if to_rep[side.start] < to_rep[side.end] else -1

    edges: List[Edge] = []
    side_edge: Dict[Tuple[int, int], int] = {}
    strips: List[Tuple[int, int]] = []
    branch_origins: List[Tuple[int, int, int, int]] = []
    arc_edges: Dict[Tuple[int, int], List[int]] = {}

    def ref(side: DiskSide) -> SideRef:
        return SideRef(polygon=side.polygon, position=side.position, flip=side.flip)

    def attach(side: DiskSide, edge: int) -> None:
        side_edge[(side.polygon, side.position)] = edge
        slots = arc_edges.setdefault((side.tet, side.face), [-1, -1, -1])
        slots[sorted(w for w in range(4) if w != side.face).index(side.arc_type)] = edge

    def branch(two: List[DiskSide], merged: SideRef) -> int:
        quad = next(s for s in two if s.is_quad)
        triangle = next(s for s in two if not s.is_quad)
        edge = len(edges)
        edges.append(Edge(kind=BRANCH, sides=(merged, ref(quad), ref(triangle))))
        branch_origins.append((edge, quad.tet, quad.face, quad.arc_type))
        for s in two:
            attach(s, edge)
        return edge

    for key in sorted(groups):
        rep_sides, other_sides = groups[key]
        counts = (len(rep_sides), len(other_sides))
        if 0 in counts:
            lonely = (rep_sides or other_sides)[0]
            raise SelectionError(
                f"arc type {lonely.arc_type} on face {lonely.face} of tetrahedron {lonely.tet} "
                f"has no matching disk across the face"
            )
        if counts == (1, 1):
            edges.append(Edge(kind=SMOOTH, sides=(ref(rep_sides[0]), ref(other_sides[0]))))
            attach(rep_sides[0], len(edges) - 1)
            attach(other_sides[0], len(edges) - 1)
        elif counts == (2, 1):
            e = branch(rep_sides, ref(other_sides[0]))
            attach(other_sides[0], e)
        elif counts == (1, 2):
            e = branch(other_sides, ref(rep_sides[0]))
            attach(rep_sides[0], e)
        else:
            strip = len(disks) + len(strips)
            alpha = len(edges)
            edges.append(Edge(kind=BRANCH, sides=(
                SideRef(polygon=strip, position=0, flip=False),
                ref(next(s for s in rep_sides if s.is_quad)),
                ref(next(s for s in rep_sides if not s.is_quad)),
            )))
            beta = len(edges)
            edges.append(Edge(kind=BRANCH, sides=(
                SideRef(polygon=strip, position=1, flip=False),
                ref(next(s for s in other_sides if s.is_quad)),
                ref(next(s for s in other_sides if not s.is_quad)),
            )))
            for edge, group in ((alpha, rep_sides), (beta, other_sides)):
                quad = next(s for s in group if s.is_quad)
                branch_origins.append((edge, quad.tet, quad.face, quad.arc_type))
                for s in group:
                    attach(s, edge)
            strips.append((alpha, beta))

    for side in free_sides:
        edges.append(Edge(kind=FREE, sides=(ref(side),)))
        side_edge[(side.polygon, side.position)] = len(edges) - 1

    polygons: List[Polygon] = []
    for p, (t, d) in enumerate(disks):
        boundary = tuple(
            (side_edge[(p, i)], orientation[(p, i)]) for i in range(len(disk_corners(d)))
        )
        polygons.append(Polygon(boundary=boundary))
    for alpha, beta in strips:
        polygons.append(Polygon(boundary=((alpha, 1), (beta, -1))))

    embedding = NormalEmbedding(
        triangulation=triangulation,
        selection=selection.types,
        polygon_disks=tuple(disks) + (None,) * len(strips),
        branch_origins=tuple(sorted(branch_origins)),
        arc_edges=tuple(sorted((key, tuple(slots)) for key, slots in arc_edges.items())),
    )
    provisional = assemble(polygons, edges)
    surface = assemble(
        polygons,
        edges,
        cut_hints=_fiber_cut_hints(provisional, disks),
        embedding=embedding,
        origin=ORIGIN_NORMAL,
    )
    logger.info(
        f"Built branched surface from {len(disks)} disk types: {len(edges)} edges, "
        f"{len(surface.branch_edges())} branch edges, {len(strips)} strips"
    )
    return surface


def _fiber_cut_hints(surface: BranchedSurface, disks: Sequence[Tuple[int, int]]) -> List[List[Corner]]:
    """
    Disk corners at the least (tetrahedron, edge) position of every vertex.

    Each carried sheet over a vertex meets the triangulation edge once in
    every tetrahedron around it, so one position is a fiber cut.
    """
    positions: Dict[int, Dict[Tuple[int, int], List[Corner]]] = {}
    for p, (t, d) in enumerate(disks):
        for corner, (a, b) in enumerate(disk_corners(d)):
            vertex = surface.corner_vertex(p, corner)
            positions.setdefault(vertex, {}).setdefault((t, edge_index(a, b)), []).append((p, corner))
    return [by_position[min(by_position)] for _, by_position in sorted(positions.items())]


def _greatest_closed(triangulation: Triangulation, allowed: List[Set[int]]) -> List[Set[int]]:
    """Largest closed subset of the allowed disk types, by repeated removal."""
    current = [set(block) for block in allowed]
    changed = True
    while changed:
        changed = False
        for t in range(triangulation.size):
            for d in sorted(current[t]):
                for side in disk_sides(0, t, d):
                    gluing = triangulation.glued(t, side.face)
                    if gluing is None:
                        continue
                    present = DiskSelection.of(current)
                    if not _arc_disks(present, gluing.tetrahedron, gluing.face, gluing.perm[side.arc_type]):
                        current[t].discard(d)
                        changed = True
                        break
    return current


def drop_disk_types(
    triangulation: Triangulation,
    selection: DiskSelection,
    dropped: Iterable[Tuple[int, int]],
) -> DiskSelection:
    """
    Greatest closed selection inside `selection` avoiding the dropped
    (tetrahedron, disk type) pairs.

    The result may be empty; every surface it carries is carried by the
    selection and uses none of the dropped disk types.
    """
    _check_selection(triangulation, selection)
    remaining = [set(block) for block in selection.types]
    for t, d in dropped:
        remaining[t].discard(d)
    return DiskSelection.of(_greatest_closed(triangulation, remaining))


def _image(selection: Selection, mapping: Sequence[Tuple[int, Perm]]) -> Selection:
    blocks: List[List[int]] = [[] for _ in selection]
    for t, block in enumerate(selection):
        target, perm = mapping[t]
        for d in block:
            if d < 4:
                blocks[target].append(perm[d])
            else:
                a, b = QUAD_PAIRS[d][0]
                blocks[target].append(quad_type(perm[a], perm[b]))
    return tuple(tuple(sorted(block)) for block in blocks)


def canonical_selection(triangulation: Triangulation, selection: DiskSelection) -> DiskSelection:
    """Least image of the selection under the combinatorial automorphisms."""
    images = [_image(selection.types, mapping) for mapping in automorphisms(triangulation)]
    return DiskSelection(types=min(images) if images else selection.types)


def candidate_selections(triangulation: Triangulation) -> List[DiskSelection]:
    """
    Maximal admissible closed selections up to automorphism.

    Closed selections with compatible quads are closed under union, so
    every quad assignment has one greatest closed selection; the maximal
    ones among those are the candidates.
    """
    n = triangulation.size
    found: Dict[Selection, DiskSelection] = {}
    for quads in product((None,) + QUADS, repeat=n):
        allowed = [{0, 1, 2, 3} | ({q} if q is not None else set()) for q in quads]
        closed = DiskSelection.of(_greatest_closed(triangulation, allowed))
        if closed.size():
            found[closed.types] = closed
    maximal = [
        s for s in found.values()
        if not any(other != s and other.contains(s) for other in found.values())
    ]
    unique = {canonical_selection(triangulation, s).types for s in maximal}
    return [DiskSelection(types=types) for types in sorted(unique)]


def candidates(triangulation: Triangulation, limit: Optional[int] = None) -> List[BranchedSurface]:
    """
    Candidate branched surfaces of a triangulation, one per maximal selection.

    Candidates may carry vertex-linking spheres; the detection pipeline
    passes to sub-branched surfaces with drop_disk_types.

    Args:
        triangulation: closed triangulation
        limit: keep at most this many candidates in canonical order

    Returns:
        One branched surface per maximal closed selection class

    Raises:
        PreconditionError: triangulation has boundary faces
    """
    if not triangulation.is_closed:
        raise PreconditionError("candidate branched surfaces need a closed triangulation")
    selections = candidate_selections(triangulation)
    if limit is not None and len(selections) > limit:
        logger.warning(f"Keeping {limit} of {len(selections)} candidate selections")
        selections = selections[:limit]
    result = [from_disk_types(triangulation, s) for s in selections]
    logger.info(f"Built {len(result)} candidate branched surfaces")
    return result
