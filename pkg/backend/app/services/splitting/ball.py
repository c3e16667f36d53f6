"""
Combinatorial balls about p(B) inside a splitting complex, and the radius.

B_0 is p(B). B_k adds every cell with a vertex in B_{k-1}. The radius is
the largest k for which B_k meets the boundary of the complex only in
p(B).
"""

import logging
from typing import Dict, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict

from services.branched.model import BranchedSurface
from .complex import P_TOKEN, SplittingComplex, complex_vertices, side_ends, unpaired_slots

logger = logging.getLogger(__name__)

# R(c) is undefined when p(B) already touches the free boundary
IMMEDIATE_BOUNDARY = -1


class Ball(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    cells: Tuple[Tuple[int, int], ...]
    vertices: int
    p_vertices: int

    @property
    def size(self) -> int:
        return len(self.cells)


class _Incidence:
    """Vertex classes of a complex, with the cells at each class."""

    def __init__(self, surface: BranchedSurface, complex_: SplittingComplex):
        classes = complex_vertices(surface, complex_)
        self.cell_vertices: Dict[Tuple[int, int], Set] = {}
        self.vertex_cells: Dict[object, Set[Tuple[int, int]]] = {}
        for p, j in complex_.layers():
            roots = {classes.find((p, j, c)) for c in range(surface.polygons[p].size)}
            self.cell_vertices[(p, j)] = roots
            for root in roots:
                self.vertex_cells.setdefault(root, set()).add((p, j))
        self.p_vertices = {classes.find(x) for x in classes.keys() if x[0] == P_TOKEN}
        self.free_vertices = set()
        for p, j, i in unpaired_slots(surface, complex_):
            for c in side_ends(surface, p, i):
                self.free_vertices.add(classes.find((p, j, c)))

    def grow(self, vertices: Set) -> Tuple[Set[Tuple[int, int]], Set]:
        cells = {cell for v in vertices for cell in self.vertex_cells.get(v, ())}
        grown = set(self.p_vertices)
        for cell in cells:
            grown |= self.cell_vertices[cell]
        return cells, grown


def ball(surface: BranchedSurface, complex_: SplittingComplex, k: int) -> Ball:
    """B_k(p(B), c) as its 2-cells."""
    if k < 0:
        raise ValueError("ball radius must be non-negative")
    incidence = _Incidence(surface, complex_)
    vertices = set(incidence.p_vertices)
    cells: Set[Tuple[int, int]] = set()
    for _ in range(k):
        cells, vertices = incidence.grow(vertices)
    return Ball(k=k, cells=tuple(sorted(cells)), vertices=len(vertices), p_vertices=len(incidence.p_vertices))


def radius(surface: BranchedSurface, complex_: SplittingComplex) -> Optional[int]:
    """
    R(c), IMMEDIATE_BOUNDARY when p(B) meets the free boundary, or None
    (infinite) when the balls stabilize without meeting it.
    """
    incidence = _Incidence(surface, complex_)
    vertices = set(incidence.p_vertices)
    if vertices & incidence.free_vertices:
        return IMMEDIATE_BOUNDARY
    k = 0
    while True:
        k += 1
        _, grown = incidence.grow(vertices)
        if grown & incidence.free_vertices:
            return k - 1
        if grown == vertices:
            return None
        vertices = grown


def radius_at_least(value: Optional[int], bound: int) -> bool:
    if value is None:
        return True
    return value >= bound


def format_radius(value: Optional[int]) -> str:
    if value is None:
        return "Infinite"
    if value == IMMEDIATE_BOUNDARY:
        return "ImmediateBoundary"
    return str(value)


def truncate(surface: BranchedSurface, complex_: SplittingComplex, k: int) -> SplittingComplex:
    """B_k(p(B), c) re-encoded as a splitting complex over the same surface."""
    if k < 1:
        raise ValueError("truncation needs k >= 1")
    kept = set(ball(surface, complex_, k).cells)
    renumber: Dict[Tuple[int, int], int] = {}
    counts: List[int] = [0] * len(complex_.counts)
    for p, j in complex_.layers():
        if (p, j) in kept:
            renumber[(p, j)] = counts[p]
            counts[p] += 1

    def slot(s):
        return s[0], renumber[(s[0], s[1])], s[2]

    pairs = tuple(
        (slot(a), slot(b)) for a, b in complex_.pairs
        if (a[0], a[1]) in kept and (b[0], b[1]) in kept
    )
    pins = tuple((slot(a), e) for a, e in complex_.pins if (a[0], a[1]) in kept)
    result = SplittingComplex(counts=tuple(counts), pairs=pairs, pins=pins, pinned=complex_.pinned)
    logger.debug(f"Truncated complex at k={k}: {complex_.cells} -> {result.cells} cells")
    return result.canonical()
