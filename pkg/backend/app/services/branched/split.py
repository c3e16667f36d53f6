"""
Splitting a branched surface along a splitting complex.

Every polygon P with n cells over it becomes n + 1 slabs. Over each edge
the fiber is cut at the cells of both sides; paired cells cut both sides
at one point. Slabs whose fiber intervals overlap are joined: one slab on
each side gives a smooth edge, several slabs are merged through a fan of
branch edges and thin strip bigons.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

from services.splitting.complex import InvalidComplexError, SplittingComplex, require_valid
from .model import (
    BRANCH,
    FREE,
    ORIGIN_SPLIT,
    SMOOTH,
    BranchedSurface,
    Corner,
    Edge,
    Polygon,
    SideRef,
    assemble,
    sector_of,
)
from .systems import component_of

logger = logging.getLogger(__name__)

Interval = Tuple[int, int]


class _Builder:
    """Collects new edges and the side of every new polygon on them."""

    def __init__(self, slab_count: int):
        self.edges: List[Edge] = []
        self.placement: Dict[Tuple[int, int], Tuple[int, int]] = {}
        self.strips = 0
        self.slab_count = slab_count

    def edge(self, kind: str, sides: Sequence[SideRef], orientations: Sequence[int]) -> int:
        index = len(self.edges)
        self.edges.append(Edge(kind=kind, sides=tuple(sides)))
        for side, orientation in zip(sides, orientations):
            self.placement[(side.polygon, side.position)] = (index, orientation)
        return index

    def strip(self) -> int:
        self.strips += 1
        return self.slab_count + self.strips - 1

    def fan(self, sheets: List[Tuple[SideRef, int]], merged: Tuple[SideRef, int]) -> None:
        """Merge sheets, bottom to top, into one side through branch edges."""
        if len(sheets) == 1:
            self.edge(SMOOTH, [merged[0], sheets[0][0]], [merged[1], sheets[0][1]])
            return
        current = sheets[0]
        for k, upper in enumerate(sheets[1:], start=1):
            if k == len(sheets) - 1:
                target = merged
            else:
                strip = self.strip()
                target = (SideRef(polygon=strip, position=0), 1)
            self.edge(BRANCH, [target[0], current[0], upper[0]], [target[1], current[1], upper[1]])
            if k < len(sheets) - 1:
                current = (SideRef(polygon=target[0].polygon, position=1), -1)


def _merge_chains(
    left: int, right: int, pairs: Dict[int, int]
) -> Tuple[List[int], List[int], int]:
    """
    Merge two ordered point chains into one fiber order.

    Returns fiber positions of the left points, of the right points, and
    the length of the merged chain. Paired points share a position; in a
    gap the unpaired left points come first.
    """
    partner = {r: h for h, r in pairs.items()}
    left_pos, right_pos = [0] * left, [0] * right
    i = k = position = 0
    while i < left or k < right:
        if i < left and i not in pairs:
            left_pos[i] = position
            i += 1
        elif k < right and k not in partner:
            right_pos[k] = position
            k += 1
        elif i < left and k < right and pairs[i] == k:
            left_pos[i] = right_pos[k] = position
            i += 1
            k += 1
        else:
            raise InvalidComplexError("pairings over an edge do not preserve the vertical order")
        position += 1
    return left_pos, right_pos, position


def _slabs(points: Sequence[int], lo: int, hi: int) -> List[Interval]:
    bounds = [lo] + list(points) + [hi]
    return list(zip(bounds, bounds[1:]))


def _own_slab(counts: Sequence[int], side: SideRef, fiber_index: int) -> int:
    return counts[side.polygon] - fiber_index if side.flip else fiber_index


def split(surface: BranchedSurface, complex_: SplittingComplex) -> BranchedSurface:
    """
    Split B along a valid splitting complex.

    Raises:
        InvalidComplexError: the complex is not valid over the surface
    """
    require_valid(surface, complex_)
    counts = complex_.counts
    slab_id: Dict[Tuple[int, int], int] = {}
    parents: List[int] = []
    for p, n in enumerate(counts):
        for s in range(n + 1):
            slab_id[(p, s)] = len(parents)
            parents.append(p)
    builder = _Builder(len(parents))

    def fiber_height(slot) -> int:
        p, j, i = slot
        side = next(s for s in surface.edges[surface.side_edge(p, i)[0]].sides if (s.polygon, s.position) == (p, i))
        return counts[p] - 1 - j if side.flip else j

    paired: Dict[int, Dict[int, Tuple[int, int]]] = {}
    for a, b in complex_.pairs:
        for x, y in ((a, b), (b, a)):
            e = surface.side_edge(x[0], x[2])[0]
            paired.setdefault(e, {})[(x[0], x[2], fiber_height(x))] = (y[0], y[2], fiber_height(y))
    pinned_at: Dict[int, int] = {}
    for a, e in complex_.pins:
        pinned_at[e] = fiber_height(a)

    for e, edge in enumerate(surface.edges):
        sheets_of = []
        for side in edge.sides:
            orientation = surface.side_edge(side.polygon, side.position)[1]
            sheets_of.append((side, orientation))
        if edge.kind == FREE:
            side, orientation = sheets_of[0]
            for s in range(counts[side.polygon] + 1):
                ref = SideRef(polygon=slab_id[(side.polygon, s)], position=side.position, flip=side.flip)
                builder.edge(FREE, [ref], [orientation])
            continue

        merged = edge.sides[0]
        right_sides = list(edge.sides[1:])
        n_left = counts[merged.polygon]
        # right chain: smooth (or side 1) points, then the cusp point and cusp points
        right_index: Dict[Tuple[int, int], int] = {}
        chain = 0
        for h in range(counts[right_sides[0].polygon]):
            right_index[(0, h)] = chain
            chain += 1
        boundary_index = None
        if edge.kind == BRANCH:
            boundary_index = chain
            chain += 1
            for h in range(counts[edge.cusp.polygon]):
                right_index[(1, h)] = chain
                chain += 1

        pairs: Dict[int, int] = {}
        for (p, i, h), (q, i2, h2) in paired.get(e, {}).items():
            if (p, i) != (merged.polygon, merged.position):
                continue
            role = 0 if (q, i2) == (right_sides[0].polygon, right_sides[0].position) else 1
            pairs[h] = right_index[(role, h2)]
        if e in pinned_at:
            pairs[pinned_at[e]] = boundary_index

        left_pos, right_pos, length = _merge_chains(n_left, chain, pairs)
        intervals: List[Tuple[Interval, int, int, int]] = []  # (interval, group, side role, fiber slab)
        for s, interval in enumerate(_slabs(left_pos, -1, length)):
            intervals.append((interval, 0, 0, s))
        if edge.kind == BRANCH:
            smooth_points = right_pos[:boundary_index]
            cusp_points = right_pos[boundary_index + 1:]
            for s, interval in enumerate(_slabs(smooth_points, -1, right_pos[boundary_index])):
                intervals.append((interval, 1, 1, s))
            for s, interval in enumerate(_slabs(cusp_points, right_pos[boundary_index], length)):
                intervals.append((interval, 1, 2, s))
        else:
            for s, interval in enumerate(_slabs(right_pos, -1, length)):
                intervals.append((interval, 1, 1, s))

        intervals.sort(key=lambda x: (x[0][0], x[0][1], x[1]))
        components: List[List[Tuple[Interval, int, int, int]]] = []
        reach = None
        for item in intervals:
            if reach is None or item[0][0] >= reach:
                components.append([item])
                reach = item[0][1]
            else:
                components[-1].append(item)
                reach = max(reach, item[0][1])

        for component in components:
            groups: List[List[Tuple[SideRef, int]]] = [[], []]
            for _, group, role, s in sorted(component, key=lambda x: (x[1], x[0])):
                side, orientation = sheets_of[role]
                own = _own_slab(counts, side, s)
                ref = SideRef(polygon=slab_id[(side.polygon, own)], position=side.position, flip=side.flip)
                groups[group].append((ref, orientation))
            left, right = groups
            if len(left) == 1 and len(right) == 1:
                builder.edge(SMOOTH, [left[0][0], right[0][0]], [left[0][1], right[0][1]])
            elif len(left) == 1:
                builder.fan(right, left[0])
            elif len(right) == 1:
                builder.fan(left, right[0])
            else:
                strip = builder.strip()
                builder.fan(left, (SideRef(polygon=strip, position=0), 1))
                builder.fan(right, (SideRef(polygon=strip, position=1), -1))

    polygons: List[Polygon] = []
    for index, parent in enumerate(parents):
        size = surface.polygons[parent].size
        polygons.append(Polygon(boundary=tuple(builder.placement[(index, i)] for i in range(size))))
    for k in range(builder.strips):
        index = len(parents) + k
        polygons.append(Polygon(boundary=(builder.placement[(index, 0)], builder.placement[(index, 1)])))
    parents.extend([-1] * builder.strips)

    draft = assemble(polygons, builder.edges, origin=ORIGIN_SPLIT, parents=parents)
    hints: Dict[int, List[Corner]] = {}
    for cut in surface.cuts:
        for p, c in cut:
            for s in range(counts[p] + 1):
                slab = slab_id[(p, s)]
                hints.setdefault(draft.corner_vertex(slab, c), []).append((slab, c))
    result = assemble(
        polygons,
        builder.edges,
        cut_hints=[hints[v] for v in sorted(hints)],
        origin=ORIGIN_SPLIT,
        parents=parents,
    ).with_flags(filter_passed=surface.filter_passed)
    logger.info(
        f"Split along {complex_.cells} cells: {len(surface.polygons)} -> {len(result.polygons)} polygons, "
        f"{len(surface.branch_edges())} -> {len(result.branch_edges())} branch edges"
    )
    return result


def complex_from_weights(
    surface: BranchedSurface,
    weights: Sequence[int],
    components: Sequence[int] = (),
) -> SplittingComplex:
    """
    The splitting complex realizing a carried surface.

    Every polygon gets as many cells as its sector's weight. Sheets pass
    straight across smooth edges; on a branch edge the merged cells go to
    the smooth cells, then to p(B) when the edge's component is listed,
    then to the cusp cells.

    Raises:
        InvalidComplexError: the weights do not satisfy the branch equations
            for the listed components
    """
    owner = sector_of(surface)
    counts = tuple(weights[owner[p]] for p in range(len(surface.polygons)))
    membership = component_of(surface)
    listed = set(components)

    def slot(side: SideRef, h: int) -> Tuple[int, int, int]:
        j = counts[side.polygon] - 1 - h if side.flip else h
        return side.polygon, j, side.position

    pairs, pins = [], []
    for e, edge in enumerate(surface.edges):
        if edge.kind == FREE:
            continue
        if edge.kind == SMOOTH:
            first, second = edge.sides
            for h in range(counts[first.polygon]):
                pairs.append((slot(first, h), slot(second, h)))
            continue
        merged = counts[edge.merged.polygon]
        smooth, cusp = counts[edge.smooth.polygon], counts[edge.cusp.polygon]
        boundary = 1 if membership.get(e) in listed else 0
        if merged != smooth + cusp + boundary:
            raise InvalidComplexError(f"weights violate the branch equation at edge {e}")
        for h in range(smooth):
            pairs.append((slot(edge.merged, h), slot(edge.smooth, h)))
        if boundary:
            pins.append((slot(edge.merged, smooth), e))
        for h in range(cusp):
            pairs.append((slot(edge.merged, smooth + boundary + h), slot(edge.cusp, h)))
    return SplittingComplex(
        counts=counts, pairs=tuple(pairs), pins=tuple(pins), pinned=tuple(sorted(listed))
    ).canonical()
