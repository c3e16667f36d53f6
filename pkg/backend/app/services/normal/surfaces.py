"""
Normal surface reconstruction and classification.

Builds the identified cell complex of a normal surface (disks, arcs and
edge points) to get per-component Euler characteristic, boundary curves
and orientability. Euler characteristic and weight are also available as
linear functionals on coordinates.
"""

import logging
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict

from services.tri import EDGES, Triangulation, build_skeleton, edge_index, face_vertices
from utils.helpers import DisjointSet
from .matching import is_admissible
from .vectors import QUAD_PAIRS, QUADS, InadmissibleVectorError, NormalVector, quad_partner, separates

logger = logging.getLogger(__name__)

SPHERE = "Sphere"
DISK = "Disk"
TORUS = "Torus"
ANNULUS = "Annulus"


class SurfaceInfo(BaseModel):
    """Topological summary of a (connected or not) normal surface."""

    model_config = ConfigDict(frozen=True)

    euler_characteristic: int
    weight: int
    boundary_curves: int
    components: int
    orientable: bool
    classification: str


def classify(chi: int, boundary_curves: int, orientable: bool) -> str:
    """Name of a connected compact surface from its invariants."""
    if orientable:
        if (chi, boundary_curves) == (2, 0):
            return SPHERE
        if (chi, boundary_curves) == (1, 1):
            return DISK
        if (chi, boundary_curves) == (0, 0):
            return TORUS
        if (chi, boundary_curves) == (0, 2):
            return ANNULUS
    return f"Other({chi},{boundary_curves})"


def _require_admissible(triangulation: Triangulation, vector: NormalVector) -> None:
    if not is_admissible(triangulation, vector):
        raise InadmissibleVectorError("normal vector is not admissible for this triangulation")


def edge_points(vector: NormalVector, tet: int, a: int, b: int) -> int:
    """Number of points in which the disks of one tetrahedron meet its edge (a, b)."""
    count = vector.get(tet, a) + vector.get(tet, b)
    for quad in QUADS:
        if separates(quad, a, b):
            count += vector.get(tet, quad)
    return count


def _face_arcs(vector: NormalVector, tet: int, face: int) -> int:
    total = 0
    for v in face_vertices(face):
        total += vector.get(tet, v)
        for quad in QUADS:
            if quad_partner(quad, face) == v:
                total += vector.get(tet, quad)
    return total


def weight(triangulation: Triangulation, vector: NormalVector) -> int:
    """
    Intersection count of the surface with the identified 1-skeleton.

    Raises:
        InadmissibleVectorError: vector does not describe a normal surface
    """
    _require_admissible(triangulation, vector)
    skel = build_skeleton(triangulation)
    total = 0
    for tet, e in skel.edge_reps:
        a, b = EDGES[e]
        total += edge_points(vector, tet, a, b)
    return total


def euler_characteristic(triangulation: Triangulation, vector: NormalVector) -> int:
    """
    Euler characteristic by cell counting over identified faces and edges.

    Disks are the 2-cells, one normal arc per identified face position is a
    1-cell and one point per identified edge position is a 0-cell.

    Raises:
        InadmissibleVectorError: vector does not describe a normal surface
    """
    _require_admissible(triangulation, vector)
    skel = build_skeleton(triangulation)
    vertices = sum(edge_points(vector, t, *EDGES[e]) for t, e in skel.edge_reps)
    edges = sum(_face_arcs(vector, t, f) for (t, f), *_ in skel.face_sides)
    faces = sum(vector.coords)
    return vertices - edges + faces


class _Disk:
    """One normal disk: tetrahedron, type, layer and its corners in cyclic order."""

    def __init__(self, tet: int, disk_type: int, layer: int, corners: List[Tuple[int, int]]):
        self.tet = tet
        self.disk_type = disk_type
        self.layer = layer
        self.corners = corners


def _quad_offset(vector: NormalVector, tet: int, quad: int, layer: int, vertex: int) -> int:
    """Position of a quad among its parallel copies, counted from `vertex`'s side."""
    count = vector.get(tet, quad)
    pair = QUAD_PAIRS[quad][0] if vertex in QUAD_PAIRS[quad][0] else QUAD_PAIRS[quad][1]
    return layer if 0 in pair else count - 1 - layer


def _disks(vector: NormalVector) -> List[_Disk]:
    disks = []
    for tet in range(vector.tetrahedra):
        for v in range(4):
            others = [w for w in range(4) if w != v]
            for layer in range(vector.get(tet, v)):
                disks.append(_Disk(tet, v, layer, [(v, w) for w in others]))
        for quad in QUADS:
            (a, b), (c, d) = QUAD_PAIRS[quad]
            for layer in range(vector.get(tet, quad)):
                disks.append(_Disk(tet, quad, layer, [(a, c), (c, b), (b, d), (d, a)]))
    return disks


def _point_from(vector: NormalVector, disk: _Disk, corner: Tuple[int, int]) -> int:
    """Position, counted from corner[0], of the disk's corner on edge corner."""
    start, _ = corner
    if disk.disk_type < 4:
        return disk.layer
    return vector.get(disk.tet, start) + _quad_offset(vector, disk.tet, disk.disk_type, disk.layer, start)


def _point_key(vector: NormalVector, tet: int, start: int, end: int, position: int) -> Tuple[int, int, int]:
    """Edge point keyed by position from the smaller vertex of the edge."""
    if start > end:
        position = edge_points(vector, tet, start, end) - 1 - position
    return tet, edge_index(start, end), position


def _arc_key(vector: NormalVector, disk: _Disk, face: int, arc_type: int) -> Tuple[int, int, int, int]:
    if disk.disk_type < 4:
        position = disk.layer
    else:
        position = vector.get(disk.tet, arc_type) + _quad_offset(vector, disk.tet, disk.disk_type, disk.layer, arc_type)
    return disk.tet, face, arc_type, position


def _sides(vector: NormalVector, disk: _Disk):
    """Yield (arc key, direction) for each side of the disk in cyclic order."""
    m = len(disk.corners)
    for i in range(m):
        first, second = disk.corners[i], disk.corners[(i + 1) % m]
        shared = (set(first) & set(second)).pop()
        w1 = first[0] if first[1] == shared else first[1]
        w2 = second[0] if second[1] == shared else second[1]
        face = ({0, 1, 2, 3} - {shared, w1, w2}).pop()
        yield _arc_key(vector, disk, face, shared), (1 if w1 < w2 else -1)


def reconstruct_components(triangulation: Triangulation, vector: NormalVector) -> List[SurfaceInfo]:
    """
    Split a normal surface into connected components and classify each.

    Args:
        triangulation: ambient triangulation
        vector: admissible normal coordinates

    Returns:
        One SurfaceInfo per component, ordered by (classification, χ, weight)

    Raises:
        InadmissibleVectorError: vector does not describe a normal surface
    """
    _require_admissible(triangulation, vector)
    disks = _disks(vector)
    arcs: DisjointSet = DisjointSet()
    points: DisjointSet = DisjointSet()
    # arc key -> (disk index, direction)
    owner: Dict[Tuple[int, int, int, int], Tuple[int, int]] = {}

    for index, disk in enumerate(disks):
        for corner in disk.corners:
            a, b = corner
            points.add(_point_key(vector, disk.tet, a, b, _point_from(vector, disk, corner)))
        for key, direction in _sides(vector, disk):
            arcs.add(key)
            owner[key] = (index, direction)

    # identify arcs and edge points across glued faces
    partner: Dict[Tuple[int, int, int, int], Tuple[Tuple[int, int, int, int], int]] = {}
    for key in list(owner):
        tet, face, arc_type, position = key
        gluing = triangulation.glued(tet, face)
        if gluing is None:
            continue
        p = gluing.perm
        image = (gluing.tetrahedron, gluing.face, p[arc_type], position)
        ws = sorted(w for w in face_vertices(face) if w != arc_type)
        parity = 1 if p[ws[0]] < p[ws[1]] else -1
        arcs.union(key, image)
        partner[key] = (image, parity)
        for w in ws:
            points.union(
                _point_key(vector, tet, arc_type, w, position),
                _point_key(vector, gluing.tetrahedron, p[arc_type], p[w], position),
            )

    # connected components of disks through shared arcs
    components: DisjointSet = DisjointSet(range(len(disks)))
    for key, (image, _) in partner.items():
        components.union(owner[key][0], owner[image][0])

    # orientation propagation: glued sides must be traversed in opposite directions
    orientation: Dict[int, int] = {}
    orientable_roots = {components.find(i): True for i in range(len(disks))}
    for start in range(len(disks)):
        if start in orientation:
            continue
        orientation[start] = 1
        stack = [start]
        while stack:
            current = stack.pop()
            for key, direction in _sides(vector, disks[current]):
                if key not in partner:
                    continue
                image, parity = partner[key]
                other, other_direction = owner[image]
                wanted = -orientation[current] * direction * parity * other_direction
                if other not in orientation:
                    orientation[other] = wanted
                    stack.append(other)
                elif orientation[other] != wanted:
                    orientable_roots[components.find(current)] = False

    results = []
    for members in components.classes():
        member_set = set(members)
        point_roots = set()
        arc_roots = set()
        boundary_arcs = []
        for index in members:
            disk = disks[index]
            for corner in disk.corners:
                a, b = corner
                point_roots.add(points.find(_point_key(vector, disk.tet, a, b, _point_from(vector, disk, corner))))
            for key, _ in _sides(vector, disk):
                arc_roots.add(arcs.find(key))
                if key not in partner:
                    boundary_arcs.append(key)
        chi = len(point_roots) - len(arc_roots) + len(member_set)

        curves: DisjointSet = DisjointSet()
        for tet, face, arc_type, position in boundary_arcs:
            ends = [
                points.find(_point_key(vector, tet, arc_type, w, position))
                for w in face_vertices(face) if w != arc_type
            ]
            curves.union(ends[0], ends[1])
        boundary = len(curves.classes())

        # each edge point lies on one identified edge; weight counts them
        orientable = orientable_roots[components.find(members[0])]
        results.append(SurfaceInfo(
            euler_characteristic=chi,
            weight=len(point_roots),
            boundary_curves=boundary,
            components=1,
            orientable=orientable,
            classification=classify(chi, boundary, orientable),
        ))

    results.sort(key=lambda info: (info.classification, info.euler_characteristic, info.weight))
    logger.debug(f"Reconstructed {len(results)} components")
    return results


def surface_info(triangulation: Triangulation, vector: NormalVector) -> SurfaceInfo:
    """Aggregate SurfaceInfo; classification is only meaningful for one component."""
    parts = reconstruct_components(triangulation, vector)
    chi = sum(p.euler_characteristic for p in parts)
    boundary = sum(p.boundary_curves for p in parts)
    orientable = all(p.orientable for p in parts)
    if not parts:
        label = "Empty"
    elif len(parts) == 1:
        label = parts[0].classification
    else:
        label = f"Disconnected({len(parts)})"
    return SurfaceInfo(
        euler_characteristic=chi,
        weight=sum(p.weight for p in parts),
        boundary_curves=boundary,
        components=len(parts),
        orientable=orientable,
        classification=label,
    )
