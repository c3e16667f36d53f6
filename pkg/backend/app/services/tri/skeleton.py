"""
Skeleton of a triangulation.

Identifies vertices, edges and faces of the tetrahedra under the gluings,
builds vertex links, walks edge links, and enumerates combinatorial
automorphisms. Class representatives are lexicographic minima of
(tetrahedron, index) so every downstream cell structure is deterministic.
"""

import logging
from functools import lru_cache
from itertools import permutations
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from utils.helpers import DisjointSet
from .gluing import Perm, Triangulation, perm_compose, perm_inverse

logger = logging.getLogger(__name__)

# edge index -> vertex pair, in lexicographic order
EDGES: Tuple[Tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX: Dict[Tuple[int, int], int] = {pair: i for i, pair in enumerate(EDGES)}


def edge_index(a: int, b: int) -> int:
    return EDGE_INDEX[(min(a, b), max(a, b))]


def face_vertices(face: int) -> Tuple[int, int, int]:
    return tuple(v for v in range(4) if v != face)  # type: ignore[return-value]


class VertexLink(BaseModel):
    """Link of one vertex class as a triangulated surface."""

    model_config = ConfigDict(frozen=True)

    vertex: int
    triangles: int
    euler_characteristic: int
    boundary_curves: int

    @property
    def is_sphere(self) -> bool:
        return self.boundary_curves == 0 and self.euler_characteristic == 2

    @property
    def is_disk(self) -> bool:
        return self.boundary_curves == 1 and self.euler_characteristic == 1


class Skeleton(BaseModel):
    """Identified simplex classes with incidence maps."""

    model_config = ConfigDict(frozen=True)

    vertex_of: Dict[Tuple[int, int], int]
    edge_of: Dict[Tuple[int, int], int]
    face_of: Dict[Tuple[int, int], int]
    vertex_reps: Tuple[Tuple[int, int], ...]
    edge_reps: Tuple[Tuple[int, int], ...]
    face_sides: Tuple[Tuple[Tuple[int, int], ...], ...]
    edge_links: Tuple[Tuple[Tuple[int, int], ...], ...]
    reversed_edges: Tuple[int, ...]

    @property
    def counts(self) -> Tuple[int, int, int]:
        return len(self.vertex_reps), len(self.edge_reps), len(self.face_sides)

    def interior_faces(self) -> List[int]:
        return [i for i, sides in enumerate(self.face_sides) if len(sides) == 2]


def _walk_edge(triangulation: Triangulation, tet: int, a: int, b: int) -> List[Tuple[int, int]]:
    """Cyclic order of (tet, edge index) around one edge, both directions if bounded."""
    c, d = (v for v in range(4) if v not in (a, b))

    def walk(t: int, x: int, y: int, exit_opposite: int, other: int) -> Tuple[List[Tuple[int, int]], bool]:
        seen: List[Tuple[int, int]] = []
        state = (t, x, y, exit_opposite, other)
        start = state
        while True:
            t, x, y, exit_opposite, other = state
            gluing = triangulation.glued(t, exit_opposite)
            if gluing is None:
                return seen, False
            p = gluing.perm
            state = (gluing.tetrahedron, p[x], p[y], p[other], p[exit_opposite])
            if state == start or (state[0], state[1], state[2]) == (start[0], start[1], start[2]):
                return seen, True
            seen.append((state[0], edge_index(state[1], state[2])))
            if len(seen) > 6 * triangulation.size + 6:
                return seen, True

    forward, closed = walk(tet, a, b, c, d)
    order = [(tet, edge_index(a, b))] + forward
    if closed:
        return order
    backward, _ = walk(tet, a, b, d, c)
    return list(reversed(backward)) + order


@lru_cache(maxsize=256)
def build_skeleton(triangulation: Triangulation) -> Skeleton:
    """Compute identified vertex/edge/face classes for a triangulation."""
    vertices: DisjointSet = DisjointSet()
    edges: DisjointSet = DisjointSet()
    faces: DisjointSet = DisjointSet()
    # oriented edge ends to detect edges identified with themselves reversed
    ends: DisjointSet = DisjointSet()

    for tet in range(triangulation.size):
        for v in range(4):
            vertices.add((tet, v))
        for e, (a, b) in enumerate(EDGES):
            edges.add((tet, e))
            ends.add((tet, a, b))
            ends.add((tet, b, a))
        for f in range(4):
            faces.add((tet, f))

    for tet in range(triangulation.size):
        for f in range(4):
            gluing = triangulation.glued(tet, f)
            if gluing is None:
                continue
            other, p = gluing.tetrahedron, gluing.perm
            faces.union((tet, f), (other, gluing.face))
            for v in face_vertices(f):
                vertices.union((tet, v), (other, p[v]))
            for a in face_vertices(f):
                for b in face_vertices(f):
                    if a < b:
                        edges.union((tet, edge_index(a, b)), (other, edge_index(p[a], p[b])))
                    if a != b:
                        ends.union((tet, a, b), (other, p[a], p[b]))

    vertex_classes = vertices.classes()
    edge_classes = edges.classes()
    face_classes = faces.classes()

    reversed_edges = []
    for index, members in enumerate(edge_classes):
        tet, e = members[0]
        a, b = EDGES[e]
        if ends.find((tet, a, b)) == ends.find((tet, b, a)):
            reversed_edges.append(index)

    edge_links = []
    for members in edge_classes:
        tet, e = members[0]
        a, b = EDGES[e]
        edge_links.append(tuple(_walk_edge(triangulation, tet, a, b)))

    return Skeleton(
        vertex_of=vertices.index_map(),
        edge_of=edges.index_map(),
        face_of=faces.index_map(),
        vertex_reps=tuple(members[0] for members in vertex_classes),
        edge_reps=tuple(members[0] for members in edge_classes),
        face_sides=tuple(tuple(members) for members in face_classes),
        edge_links=tuple(edge_links),
        reversed_edges=tuple(reversed_edges),
    )


def skeleton(triangulation: Triangulation) -> Tuple[int, int, int, int]:
    """
    Counts of identified simplex classes.

    Returns:
        (V, E, F, T) after identification
    """
    v, e, f = build_skeleton(triangulation).counts
    return v, e, f, triangulation.size


@lru_cache(maxsize=256)
def vertex_links(triangulation: Triangulation) -> Tuple[VertexLink, ...]:
    """
    Build the link of every vertex class as a triangulated surface.

    Link triangles are corners (t, v); link edges are corner sides (t, v, f)
    identified across face f; link vertices are edge ends (t, v, w).
    """
    skel = build_skeleton(triangulation)
    link_edges: DisjointSet = DisjointSet()
    link_vertices: DisjointSet = DisjointSet()
    boundary_sides = []

    for tet in range(triangulation.size):
        for v in range(4):
            for w in range(4):
                if w != v:
                    link_vertices.add((tet, v, w))
            for f in range(4):
                if f == v:
                    continue
                link_edges.add((tet, v, f))
                gluing = triangulation.glued(tet, f)
                if gluing is None:
                    boundary_sides.append((tet, v, f))
                    continue
                p = gluing.perm
                link_edges.union((tet, v, f), (gluing.tetrahedron, p[v], gluing.face))
                for w in face_vertices(f):
                    if w != v:
                        link_vertices.union((tet, v, w), (gluing.tetrahedron, p[v], p[w]))

    links = []
    for index, (rep_tet, rep_v) in enumerate(skel.vertex_reps):
        corners = [key for key, cls in skel.vertex_of.items() if cls == index]
        corner_set = set(corners)
        triangles = len(corners)
        edge_roots = {link_edges.find((t, v, f)) for (t, v) in corners for f in range(4) if f != v}
        vertex_roots = {link_vertices.find((t, v, w)) for (t, v) in corners for w in range(4) if w != v}
        chi = len(vertex_roots) - len(edge_roots) + triangles

        # boundary curves: components of the graph of boundary link edges
        curve_groups: DisjointSet = DisjointSet()
        for (t, v, f) in boundary_sides:
            if (t, v) not in corner_set:
                continue
            ws = [w for w in face_vertices(f) if w != v]
            ends_ = [link_vertices.find((t, v, w)) for w in ws]
            curve_groups.union(ends_[0], ends_[1])
        links.append(VertexLink(
            vertex=index,
            triangles=triangles,
            euler_characteristic=chi,
            boundary_curves=len(curve_groups.classes()),
        ))
    return tuple(links)


def _extend_isomorphism(
    triangulation: Triangulation, start: int, image: int, perm: Perm
) -> Optional[Dict[int, Tuple[int, Perm]]]:
    """Propagate tet start -> (image, perm) along gluings; None if inconsistent."""
    mapping: Dict[int, Tuple[int, Perm]] = {start: (image, perm)}
    used = {image}
    queue = [start]
    while queue:
        tet = queue.pop()
        target, sigma = mapping[tet]
        for f in range(4):
            source_gluing = triangulation.glued(tet, f)
            target_gluing = triangulation.glued(target, sigma[f])
            if (source_gluing is None) != (target_gluing is None):
                return None
            if source_gluing is None:
                continue
            neighbour = source_gluing.tetrahedron
            # sigma_n = p' ∘ sigma ∘ p^-1
            sigma_n = perm_compose(target_gluing.perm, perm_compose(sigma, perm_inverse(source_gluing.perm)))
            expected = (target_gluing.tetrahedron, sigma_n)
            if neighbour in mapping:
                if mapping[neighbour] != expected:
                    return None
                continue
            if target_gluing.tetrahedron in used:
                return None
            mapping[neighbour] = expected
            used.add(target_gluing.tetrahedron)
            queue.append(neighbour)
    return mapping


@lru_cache(maxsize=64)
def automorphisms(triangulation: Triangulation) -> Tuple[Tuple[Tuple[int, Perm], ...], ...]:
    """
    Combinatorial automorphisms as tuples indexed by tetrahedron of (image, perm).

    Components not reached from tetrahedron 0 are fixed pointwise.
    """
    n = triangulation.size
    if n == 0:
        return ((),)
    found = []
    for image in range(n):
        for perm in permutations(range(4)):
            mapping = _extend_isomorphism(triangulation, 0, image, perm)  # type: ignore[arg-type]
            if mapping is None:
                continue
            full = []
            for tet in range(n):
                full.append(mapping.get(tet, (tet, (0, 1, 2, 3))))
            images = [target for target, _ in full]
            if len(set(images)) != n:
                continue
            found.append(tuple(full))
    found.sort()
    logger.debug(f"Found {len(found)} automorphisms of a {n}-tetrahedron triangulation")
    return tuple(found)
