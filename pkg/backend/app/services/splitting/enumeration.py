"""
Enumeration of splitting complexes by number of cells.

Stack-count profiles are visited by total then lexicographically. Inside a
profile every edge gets an order-preserving partial matching between its
sides; the product is filtered by is_valid and by the least-code rule
over the symmetries of B, so each class is emitted once. Complexes of a
profile are emitted sorted by code.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import product
from typing import Iterator, List, Optional, Sequence, Tuple

from services.branched.model import BRANCH, FREE, BranchedSurface
from services.branched.systems import vertical_components
from .cells import is_canonical
from .complex import Slot, SplittingComplex, is_valid

logger = logging.getLogger(__name__)

Matching = Tuple[Tuple[Tuple[Slot, Slot], ...], Tuple[Tuple[Slot, int], ...]]


def profiles(polygons: int, max_cells: int, min_cells: int = 0) -> Iterator[Tuple[int, ...]]:
    """Stack counts with min_cells <= total <= max_cells, by total then lexicographically."""

    def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
        if parts == 0:
            if total == 0:
                yield ()
            return
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    for total in range(min_cells, max_cells + 1):
        yield from compositions(total, polygons)


def monotone_matchings(
    sources: int, targets: int, required: Optional[int] = None
) -> Iterator[Tuple[Tuple[int, int], ...]]:
    """
    Order-preserving partial injections {0..sources-1} -> {0..targets-1}.

    When required is set, target `required` must be hit.
    """
    chosen: List[Tuple[int, int]] = []

    def descend(i: int, last: int) -> Iterator[Tuple[Tuple[int, int], ...]]:
        if required is not None and last >= required and all(t != required for _, t in chosen):
            return
        if i == sources:
            if required is None or any(t == required for _, t in chosen):
                yield tuple(chosen)
            return
        yield from descend(i + 1, last)
        for t in range(last + 1, targets):
            chosen.append((i, t))
            yield from descend(i + 1, t)
            chosen.pop()

    yield from descend(0, -1)


def _layer(counts: Sequence[int], polygon: int, flip: bool, h: int) -> int:
    return counts[polygon] - 1 - h if flip else h


def edge_matchings(
    surface: BranchedSurface, counts: Sequence[int], edge_id: int, pinned: bool
) -> List[Matching]:
    """All role-respecting order-preserving pairings over one edge."""
    edge = surface.edges[edge_id]
    if edge.kind == FREE:
        return [((), ())]
    merged = edge.sides[0]
    others = []
    if edge.kind == BRANCH:
        others.extend((edge.smooth, h) for h in range(counts[edge.smooth.polygon]))
        if pinned:
            others.append((None, 0))
        others.extend((edge.cusp, h) for h in range(counts[edge.cusp.polygon]))
    else:
        others.extend((edge.sides[1], h) for h in range(counts[edge.sides[1].polygon]))
    required = counts[edge.smooth.polygon] if edge.kind == BRANCH and pinned else None

    result: List[Matching] = []
    for injection in monotone_matchings(counts[merged.polygon], len(others), required):
        pairs, pins = [], []
        for h, t in injection:
            slot = (merged.polygon, _layer(counts, merged.polygon, merged.flip, h), merged.position)
            side, other_h = others[t]
            if side is None:
                pins.append((slot, edge_id))
            else:
                pairs.append((slot, (side.polygon, _layer(counts, side.polygon, side.flip, other_h), side.position)))
        result.append((tuple(pairs), tuple(pins)))
    return result


class ProfileResult:
    def __init__(self, complexes: List[SplittingComplex], examined: int, aborted: bool):
        self.complexes = complexes
        self.examined = examined
        self.aborted = aborted


def scan_profile(
    surface: BranchedSurface, counts: Tuple[int, ...], cap: Optional[int] = None
) -> ProfileResult:
    """Valid canonical complexes with the given stack counts, sorted by code."""
    components = tuple(range(len(vertical_components(surface))))
    pinned_edges = {e for k in components for e in vertical_components(surface)[k]}
    options = [
        edge_matchings(surface, counts, e, e in pinned_edges)
        for e in range(len(surface.edges))
    ]
    found: List[SplittingComplex] = []
    examined = 0
    for choice in product(*options):
        examined += 1
        if cap is not None and examined > cap:
            return ProfileResult(found, examined, aborted=True)
        complex_ = SplittingComplex(
            counts=counts,
            pairs=tuple(pair for pairs, _ in choice for pair in pairs),
            pins=tuple(pin for _, pins in choice for pin in pins),
            pinned=components,
        ).canonical()
        if not is_valid(surface, complex_):
            continue
        if not is_canonical(surface, complex_):
            continue
        found.append(complex_)
    found.sort(key=lambda c: c.code())
    return ProfileResult(found, examined, aborted=False)


class ComplexEnumerator:
    """
    Restartable stream of splitting complexes with at most max_cells cells.

    examined counts generated pairings; a stream stops before the first
    profile that would push it past cap and sets capped. profile_cap bounds
    the stack-count profiles scanned, most of which admit no pairing once
    max_cells is large.
    """

    def __init__(
        self,
        surface: BranchedSurface,
        max_cells: int,
        cap: Optional[int] = None,
        workers: int = 1,
        min_cells: int = 0,
        profile_cap: Optional[int] = None,
    ):
        if max_cells < 0:
            raise ValueError("max_cells must be non-negative")
        self.surface = surface
        self.max_cells = max_cells
        self.min_cells = min_cells
        self.cap = cap
        self.profile_cap = profile_cap
        self.workers = max(1, workers)
        self.examined = 0
        self.emitted = 0
        self.profiles = 0
        self.capped = False

    def _profiles_left(self) -> bool:
        if self.profile_cap is not None and self.profiles >= self.profile_cap:
            self.capped = True
            logger.warning(f"Splitting complex enumeration capped after {self.profiles} profiles")
            return False
        self.profiles += 1
        return True

    def _accept(self, result: ProfileResult) -> bool:
        if result.aborted or (self.cap is not None and self.examined + result.examined > self.cap):
            self.capped = True
            logger.warning(f"Splitting complex enumeration capped after {self.examined} pairings")
            return False
        self.examined += result.examined
        return True

    def __iter__(self) -> Iterator[SplittingComplex]:
        self.examined = 0
        self.emitted = 0
        self.profiles = 0
        self.capped = False
        stream = profiles(len(self.surface.polygons), self.max_cells, self.min_cells)
        if self.workers == 1:
            for counts in stream:
                if not self._profiles_left():
                    return
                remaining = None if self.cap is None else self.cap - self.examined
                result = scan_profile(self.surface, counts, remaining)
                if not self._accept(result):
                    return
                for complex_ in result.complexes:
                    self.emitted += 1
                    yield complex_
            return

        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            while True:
                batch = []
                for counts in stream:
                    if not self._profiles_left():
                        break
                    batch.append(counts)
                    if len(batch) == self.workers:
                        break
                if not batch:
                    return
                remaining = None if self.cap is None else self.cap - self.examined
                futures = [pool.submit(scan_profile, self.surface, counts, remaining) for counts in batch]
                for future in futures:
                    result = future.result()
                    if not self._accept(result):
                        return
                    for complex_ in result.complexes:
                        self.emitted += 1
                        yield complex_


def enumerate_complexes(
    surface: BranchedSurface,
    max_cells: int,
    cap: Optional[int] = None,
    workers: int = 1,
) -> Iterator[SplittingComplex]:
    """Canonical stream of valid splitting complexes with at most max_cells cells."""
    return iter(ComplexEnumerator(surface, max_cells, cap, workers))
