"""
Horizontal boundary, complementary blocks and trivial bubbles.

The horizontal boundary of N(B) is built from the two faces of every
polygon: along each edge the faces are glued the way the sheets continue
(top to top, bottom to bottom), and at a branch edge the top face of the
smooth sheet and the bottom face of the cusp sheet stay unglued. Those
loose sides run along the vertical boundary.

Complementary blocks need the normal realization. Each tetrahedron is cut
by its selected disks into corner pieces C(t, v), one under every selected
triangle, and half pieces H(t, pair), one per side of the selected quad
(or a single H(t, ()) when the tetrahedron has no quad). Pieces are glued
across faces region by region.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from services.normal import QUAD_PAIRS, QUADS
from services.tri import Triangulation, face_vertices
from utils.helpers import DisjointSet
from .model import (
    FREE,
    SMOOTH,
    BranchedSurface,
    BranchedSurfaceError,
    Corner,
    Edge,
    MissingEmbeddingError,
    Polygon,
    SideRef,
    assemble,
    sector_of,
    sectors,
)
from .systems import component_of, vertical_components

logger = logging.getLogger(__name__)

PRODUCT_DISK = "ProductD2xI"
MONOGON_CANDIDATE = "MonogonTimesS1Candidate"
OTHER_BLOCK = "Other"

Face = Tuple[int, int]
Piece = Tuple[int, str, Tuple[int, ...]]


class HorizontalPiece(BaseModel):
    """One component of the horizontal boundary, as polygon faces."""

    model_config = ConfigDict(frozen=True)

    faces: Tuple[Face, ...]
    euler_characteristic: int
    boundary_curves: int

    @property
    def is_sphere(self) -> bool:
        return (self.euler_characteristic, self.boundary_curves) == (2, 0)

    @property
    def is_disk(self) -> bool:
        return (self.euler_characteristic, self.boundary_curves) == (1, 1)

    @property
    def is_annulus(self) -> bool:
        return (self.euler_characteristic, self.boundary_curves) == (0, 2)


class ComplementBlock(BaseModel):
    model_config = ConfigDict(frozen=True)

    pieces: Tuple[Piece, ...]
    horizontal: Tuple[HorizontalPiece, ...]
    vertical: Tuple[int, ...]
    euler_characteristic: int
    kind: str


class TrivialBubble(BaseModel):
    """Two disk sectors bounding a product region along the same branch edges."""

    model_config = ConfigDict(frozen=True)

    smooth_sector: int
    cusp_sector: int
    edges: Tuple[int, ...]
    component: int
    block: Optional[int] = None


def _top_face(side: SideRef) -> int:
    # face 1 is the polygon's upper face; flip turns it to the fiber's lower side
    return 0 if side.flip else 1


def _face_gluings(edge: Edge) -> Tuple[List[Tuple[Tuple[SideRef, int], Tuple[SideRef, int]]], List[Tuple[SideRef, int]]]:
    """Glued face-side pairs and loose face sides along one edge."""
    if edge.kind == FREE:
        side = edge.sides[0]
        return [], [(side, 0), (side, 1)]
    if edge.kind == SMOOTH:
        a, b = edge.sides
        return [((a, _top_face(a)), (b, _top_face(b))), ((a, 1 - _top_face(a)), (b, 1 - _top_face(b)))], []
    merged, smooth, cusp = edge.sides
    glued = [
        ((merged, _top_face(merged)), (cusp, _top_face(cusp))),
        ((merged, 1 - _top_face(merged)), (smooth, 1 - _top_face(smooth))),
    ]
    return glued, [(smooth, _top_face(smooth)), (cusp, 1 - _top_face(cusp))]


def _side_ends(surface: BranchedSurface, side: SideRef) -> Tuple[int, int]:
    """(tail corner, head corner) of a polygon side relative to its edge."""
    polygon = surface.polygons[side.polygon]
    nxt = (side.position + 1) % polygon.size
    if polygon.boundary[side.position][1] > 0:
        return side.position, nxt
    return nxt, side.position


def horizontal_boundary(surface: BranchedSurface) -> List[HorizontalPiece]:
    """Components of the horizontal boundary with their χ and boundary curve count."""
    faces: DisjointSet = DisjointSet()
    corners: DisjointSet = DisjointSet()
    for p, polygon in enumerate(surface.polygons):
        for s in (0, 1):
            faces.add((p, s))
            for c in range(polygon.size):
                corners.add((p, s, c))

    glued_count: Dict[Face, int] = {}
    loose: List[Tuple[SideRef, int]] = []
    for edge in surface.edges:
        pairs, unglued = _face_gluings(edge)
        loose.extend(unglued)
        for (x, fx), (y, fy) in pairs:
            faces.union((x.polygon, fx), (y.polygon, fy))
            x_tail, x_head = _side_ends(surface, x)
            y_tail, y_head = _side_ends(surface, y)
            corners.union((x.polygon, fx, x_tail), (y.polygon, fy, y_tail))
            corners.union((x.polygon, fx, x_head), (y.polygon, fy, y_head))
            glued_count[(x.polygon, fx)] = glued_count.get((x.polygon, fx), 0) + 1

    pieces = []
    for members in faces.classes():
        member_set = set(members)
        vertex_roots = {
            corners.find((p, s, c)) for p, s in members for c in range(surface.polygons[p].size)
        }
        glued = sum(glued_count.get(face, 0) for face in members)
        curves: DisjointSet = DisjointSet()
        loose_here = 0
        for side, s in loose:
            if (side.polygon, s) not in member_set:
                continue
            loose_here += 1
            tail, head = _side_ends(surface, side)
            curves.union(corners.find((side.polygon, s, tail)), corners.find((side.polygon, s, head)))
        chi = len(vertex_roots) - (glued + loose_here) + len(members)
        pieces.append(HorizontalPiece(
            faces=tuple(members),
            euler_characteristic=chi,
            boundary_curves=len(curves.classes()),
        ))
    return pieces


def _half(tet_quads: Dict[int, Optional[int]], tet: int, vertex: int) -> Piece:
    quad = tet_quads[tet]
    if quad is None:
        return tet, "H", ()
    pair = next(pair for pair in QUAD_PAIRS[quad] if vertex in pair)
    return tet, "H", pair


def _face_piece(tet_quads, polygon_disk: Tuple[int, int], face: int) -> Piece:
    t, d = polygon_disk
    if d < 4:
        return (t, "C", (d,)) if face == 0 else _half(tet_quads, t, d)
    zero_side = next(pair for pair in QUAD_PAIRS[d] if 0 in pair)
    other = next(pair for pair in QUAD_PAIRS[d] if 0 not in pair)
    return t, "H", zero_side if face == 0 else other


def _region_owners(selection, tet_quads, tet: int, face: int) -> Tuple[Dict[int, Piece], Piece]:
    """Owners of the corner regions (keyed by vertex) and the central region of a face."""
    corners: Dict[int, Piece] = {}
    quad = tet_quads[tet]
    for v in face_vertices(face):
        if v in selection[tet]:
            corners[v] = (tet, "C", (v,))
        elif quad is not None and (min(v, face), max(v, face)) in QUAD_PAIRS[quad]:
            corners[v] = (tet, "H", (min(v, face), max(v, face)))
    if quad is None:
        central: Piece = (tet, "H", ())
    else:
        central = (tet, "H", next(pair for pair in QUAD_PAIRS[quad] if face not in pair))
    return corners, central


def complement_blocks(
    surface: BranchedSurface,
    triangulation: Optional[Triangulation] = None,
) -> List[ComplementBlock]:
    """
    Cut the triangulation along the normal realization and group the pieces.

    Raises:
        MissingEmbeddingError: surface has no normal realization
        BranchedSurfaceError: triangulation has boundary
    """
    embedding = surface.embedding
    if embedding is None:
        raise MissingEmbeddingError("complement blocks need a normal embedding")
    triangulation = triangulation or embedding.triangulation
    if not triangulation.is_closed:
        raise BranchedSurfaceError("complement blocks need a closed triangulation")
    selection = embedding.selection
    tet_quads = {
        t: next((d for d in block if d in QUADS), None) for t, block in enumerate(selection)
    }

    pieces: DisjointSet = DisjointSet()
    for t, block in enumerate(selection):
        for d in block:
            if d < 4:
                pieces.add((t, "C", (d,)))
        if tet_quads[t] is None:
            pieces.add((t, "H", ()))
        else:
            for pair in QUAD_PAIRS[tet_quads[t]]:
                pieces.add((t, "H", pair))

    for t in range(triangulation.size):
        for f in range(4):
            gluing = triangulation.glued(t, f)
            corners, central = _region_owners(selection, tet_quads, t, f)
            other_corners, other_central = _region_owners(selection, tet_quads, gluing.tetrahedron, gluing.face)
            pieces.union(central, other_central)
            for v, owner in corners.items():
                image = gluing.perm[v]
                if image in other_corners:
                    pieces.union(owner, other_corners[image])

    index = pieces.index_map()
    classes = pieces.classes()

    horizontal: Dict[int, List[HorizontalPiece]] = {}
    for piece in horizontal_boundary(surface):
        face = next((f for f in piece.faces if embedding.polygon_disks[f[0]] is not None), None)
        if face is None:
            continue
        owner = _face_piece(tet_quads, embedding.polygon_disks[face[0]], face[1])
        horizontal.setdefault(index[owner], []).append(piece)

    origin_of = {edge: (t, f, g) for edge, t, f, g in embedding.branch_origins}
    vertical: Dict[int, List[int]] = {}
    for component, members in enumerate(vertical_components(surface)):
        t, f, g = origin_of[members[0]]
        wedge = (t, "H", (min(g, f), max(g, f)))
        vertical.setdefault(index[wedge], []).append(component)

    blocks = []
    for b, members in enumerate(classes):
        hs = tuple(horizontal.get(b, []))
        vs = tuple(vertical.get(b, []))
        chi = sum(h.euler_characteristic for h in hs) // 2
        if len(hs) == 2 and all(h.is_disk for h in hs) and len(vs) == 1:
            kind = PRODUCT_DISK
        elif len(hs) == 1 and hs[0].is_annulus and len(vs) == 1:
            kind = MONOGON_CANDIDATE
        else:
            kind = OTHER_BLOCK
        blocks.append(ComplementBlock(
            pieces=tuple(members),
            horizontal=hs,
            vertical=vs,
            euler_characteristic=chi,
            kind=kind,
        ))
    logger.info(f"Complement has {len(blocks)} blocks")
    return blocks


def _bubble_candidates(surface: BranchedSurface) -> List[TrivialBubble]:
    owner = sector_of(surface)
    all_sectors = sectors(surface)
    membership = component_of(surface)
    as_smooth: Dict[int, List[int]] = {}
    as_cusp: Dict[int, List[int]] = {}
    for e in surface.branch_edges():
        edge = surface.edges[e]
        as_smooth.setdefault(owner[edge.smooth.polygon], []).append(e)
        as_cusp.setdefault(owner[edge.cusp.polygon], []).append(e)

    found = []
    for s, edges in sorted(as_smooth.items()):
        sector = all_sectors[s]
        if not sector.is_disk or len(edges) != len(sector.boundary_sides):
            continue
        for c, cusp_edges in sorted(as_cusp.items()):
            other = all_sectors[c]
            if c == s or not other.is_disk or len(cusp_edges) != len(other.boundary_sides):
                continue
            if sorted(edges) != sorted(cusp_edges):
                continue
            found.append(TrivialBubble(
                smooth_sector=s,
                cusp_sector=c,
                edges=tuple(sorted(edges)),
                component=membership[min(edges)],
            ))
    return found


def trivial_bubbles(
    surface: BranchedSurface,
    blocks: Optional[Sequence[ComplementBlock]] = None,
) -> List[TrivialBubble]:
    """
    Pairs of disk sectors that are the smooth and cusp sheets of exactly the
    same branch edges, so their boundaries project to the same curve.

    With complement blocks, a pair only counts when a ProductD2xI block sits
    on its vertical boundary component.
    """
    found = _bubble_candidates(surface)
    if blocks is None:
        return found
    confirmed = []
    for bubble in found:
        for b, block in enumerate(blocks):
            if block.kind == PRODUCT_DISK and bubble.component in block.vertical:
                confirmed.append(bubble.model_copy(update={"block": b}))
                break
    return confirmed


def collapse_bubble(surface: BranchedSurface, bubble: TrivialBubble) -> BranchedSurface:
    """
    Remove the cusp disk of a trivial bubble; its branch edges become smooth.

    The normal embedding is dropped since the result is no longer a union of
    normal disk types.
    """
    removed = set(sectors(surface)[bubble.cusp_sector].polygons)
    keep_polygons = [p for p in range(len(surface.polygons)) if p not in removed]
    polygon_map = {p: i for i, p in enumerate(keep_polygons)}

    keep_edges = []
    for e, edge in enumerate(surface.edges):
        if all(side.polygon in removed for side in edge.sides):
            continue
        keep_edges.append(e)
    edge_map = {e: i for i, e in enumerate(keep_edges)}

    def moved(side: SideRef) -> SideRef:
        return side.model_copy(update={"polygon": polygon_map[side.polygon]})

    edges = []
    for e in keep_edges:
        edge = surface.edges[e]
        if e in bubble.edges:
            edges.append(Edge(kind=SMOOTH, sides=(moved(edge.merged), moved(edge.smooth))))
        else:
            edges.append(Edge(kind=edge.kind, sides=tuple(moved(s) for s in edge.sides)))
    polygons = [
        Polygon(boundary=tuple((edge_map[e], o) for e, o in surface.polygons[p].boundary))
        for p in keep_polygons
    ]
    hints: List[List[Corner]] = []
    for cut in surface.cuts:
        kept = [(polygon_map[p], c) for p, c in cut if p in polygon_map]
        if kept:
            hints.append(kept)
    logger.debug(f"Collapsed bubble on edges {bubble.edges}")
    return assemble(polygons, edges, cut_hints=hints, origin=surface.origin)
