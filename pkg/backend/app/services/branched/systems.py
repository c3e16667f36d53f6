"""
Branch equations, vertical boundary components and relative systems.

Variables are sector weights. Each branch edge contributes

    w(merged) - w(smooth) - w(cusp) = c

with c = 0 for the homogeneous system and c = k when the edge lies on a
vertical boundary component crossed k times by the boundary of the
carried surface (the x_i + x_j = x_k - 1 shape for k = 1).
"""

import logging
from functools import lru_cache
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from utils.exact import dot
from utils.helpers import DisjointSet
from .model import BRANCH, FREE, BranchedSurface, UnknownComponentError, sector_of, sectors

logger = logging.getLogger(__name__)


class BranchSystem(BaseModel):
    """Linear system over sector weights plus the χ and weight functionals."""

    model_config = ConfigDict(frozen=True)

    variables: int
    rows: Tuple[Tuple[int, ...], ...]
    rhs: Tuple[int, ...]
    row_edges: Tuple[int, ...]
    chi: Tuple[int, ...]
    cells: Tuple[int, ...]

    @property
    def homogeneous(self) -> bool:
        return not any(self.rhs)

    def residual(self, weights: Sequence[int]) -> List[int]:
        return [dot(row, weights) - b for row, b in zip(self.rows, self.rhs)]

    def euler_characteristic(self, weights: Sequence[int]) -> int:
        return dot(self.chi, weights)

    def weight(self, weights: Sequence[int]) -> int:
        return dot(self.cells, weights)


@lru_cache(maxsize=256)
def vertical_components(surface: BranchedSurface) -> Tuple[Tuple[int, ...], ...]:
    """
    Components of the vertical boundary as tuples of branch edge ids.

    Two branch edges sharing a vertex are on one component when their
    smooth sides lie in one sector or their cusp sides lie in one sector.
    """
    owner = sector_of(surface)
    branch = surface.branch_edges()
    groups: DisjointSet = DisjointSet(branch)
    for i, a in enumerate(branch):
        for b in branch[i + 1:]:
            if not set(surface.edge_ends[a]) & set(surface.edge_ends[b]):
                continue
            ea, eb = surface.edges[a], surface.edges[b]
            if owner[ea.smooth.polygon] == owner[eb.smooth.polygon] or owner[ea.cusp.polygon] == owner[eb.cusp.polygon]:
                groups.union(a, b)
    return tuple(tuple(members) for members in groups.classes())


def component_of(surface: BranchedSurface) -> Dict[int, int]:
    return {e: k for k, members in enumerate(vertical_components(surface)) for e in members}


def chi_functional(surface: BranchedSurface) -> Tuple[int, ...]:
    """
    Linear form giving χ of a carried surface from sector weights.

    2-cells count once per polygon, 1-cells once per edge on its first side
    (the merged side of a branch edge), 0-cells once per corner of each
    vertex's fiber cut.
    """
    owner = sector_of(surface)
    coefficients = [0] * len(sectors(surface))
    for p in range(len(surface.polygons)):
        coefficients[owner[p]] += 1
    for edge in surface.edges:
        coefficients[owner[edge.sides[0].polygon]] -= 1
    for cut in surface.cuts:
        for p, _ in cut:
            coefficients[owner[p]] += 1
    return tuple(coefficients)


def free_sectors(surface: BranchedSurface) -> List[int]:
    """Sectors with a side on a free edge."""
    owner = sector_of(surface)
    return sorted({owner[edge.sides[0].polygon] for edge in surface.edges if edge.kind == FREE})


def branch_system(
    surface: BranchedSurface,
    boundary_spec: Optional[Mapping[int, int]] = None,
    closed: bool = False,
) -> BranchSystem:
    """
    Build the branch equations of a branched surface.

    Args:
        surface: branched surface
        boundary_spec: vertical component index -> number of boundary
            circles of the carried surface on that component
        closed: add w = 0 for every sector touching a free edge

    Returns:
        BranchSystem: one row per branch edge, then the closure rows

    Raises:
        UnknownComponentError: boundary_spec names a missing component
    """
    boundary_spec = dict(boundary_spec or {})
    components = vertical_components(surface)
    for component in boundary_spec:
        if not 0 <= component < len(components):
            raise UnknownComponentError(f"no vertical boundary component {component}")
    membership = component_of(surface)
    owner = sector_of(surface)
    width = len(sectors(surface))

    rows: List[Tuple[int, ...]] = []
    rhs: List[int] = []
    row_edges: List[int] = []
    for index, edge in enumerate(surface.edges):
        if edge.kind != BRANCH:
            continue
        row = [0] * width
        row[owner[edge.merged.polygon]] += 1
        row[owner[edge.smooth.polygon]] -= 1
        row[owner[edge.cusp.polygon]] -= 1
        rows.append(tuple(row))
        rhs.append(boundary_spec.get(membership[index], 0))
        row_edges.append(index)

    if closed:
        for sector in free_sectors(surface):
            rows.append(tuple(1 if j == sector else 0 for j in range(width)))
            rhs.append(0)
            row_edges.append(-1)

    return BranchSystem(
        variables=width,
        rows=tuple(rows),
        rhs=tuple(rhs),
        row_edges=tuple(row_edges),
        chi=chi_functional(surface),
        cells=tuple(s.cells for s in sectors(surface)),
    )


def box_solutions(
    rows: Sequence[Sequence[int]],
    rhs: Sequence[int],
    bounds: Sequence[int],
) -> Iterator[Tuple[int, ...]]:
    """
    All integer points 0 <= x <= bounds with rows·x = rhs, lexicographically.

    Each equation keeps the interval its unassigned variables can still
    reach, so branches that cannot close the residual are cut early.
    """
    width = len(bounds)
    # reach[k][i] = (min, max) contribution of variables k.. to row i
    reach = [[(0, 0)] * len(rows) for _ in range(width + 1)]
    for k in range(width - 1, -1, -1):
        reach[k] = [
            (
                lo + min(0, row[k] * bounds[k]),
                hi + max(0, row[k] * bounds[k]),
            )
            for row, (lo, hi) in zip(rows, reach[k + 1])
        ]

    point = [0] * width
    partial = [0] * len(rows)

    def descend(k: int) -> Iterator[Tuple[int, ...]]:
        if k == width:
            if all(p == b for p, b in zip(partial, rhs)):
                yield tuple(point)
            return
        for value in range(bounds[k] + 1):
            feasible = True
            for i, row in enumerate(rows):
                current = partial[i] + row[k] * value
                lo, hi = reach[k + 1][i]
                if not lo <= rhs[i] - current <= hi:
                    feasible = False
                    break
            if not feasible:
                continue
            point[k] = value
            for i, row in enumerate(rows):
                partial[i] += row[k] * value
            yield from descend(k + 1)
            for i, row in enumerate(rows):
                partial[i] -= row[k] * value
        point[k] = 0

    yield from descend(0)
