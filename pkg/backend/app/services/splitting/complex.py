"""
Splitting complexes over a branched surface.

A complex stacks n_P cells over every polygon P, numbered bottom to top in
the polygon's own vertical order. A slot (P, j, i) is side i of cell j over
P. Slots are paired with slots over the same edge, or pinned to the core
circle p(B) of a vertical boundary component through one of its branch
edges ("p:E").

Text encoding (version sc1):

    sc1
    counts 1 0 0
    pinned 0
    (0,0,1)~(0,0,3)
    (0,0,0)~p:0
"""

import logging
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from services.branched.model import FREE, BranchedSurface
from services.branched.systems import component_of, vertical_components
from utils.helpers import DisjointSet

logger = logging.getLogger(__name__)

ENCODING_VERSION = "sc1"

Slot = Tuple[int, int, int]

# first entry of vertex tokens on p(B); cell corners start with a polygon id
P_TOKEN = -1

REASON_STRUCTURE = "structure"
REASON_FREE_EDGE = "free edge"
REASON_ROLES = "roles"
REASON_ORDERINGS = "orderings"
REASON_PINS = "p(B) pairing"
REASON_BRANCHING = "branching"


class SplittingError(Exception):
    """Base exception for splitting complex errors."""
    pass


class InvalidComplexError(SplittingError):
    """Raised for unparsable complexes or complexes that break an invariant."""
    pass


class DegenerateSurfaceError(SplittingError):
    """Raised when the branch locus is empty and p(B) does not exist."""
    pass


class SplittingComplex(BaseModel):
    model_config = ConfigDict(frozen=True)

    counts: Tuple[int, ...]
    pairs: Tuple[Tuple[Slot, Slot], ...] = ()
    pins: Tuple[Tuple[Slot, int], ...] = ()
    pinned: Tuple[int, ...] = ()

    @property
    def cells(self) -> int:
        return sum(self.counts)

    def canonical(self) -> "SplittingComplex":
        return SplittingComplex(
            counts=self.counts,
            pairs=tuple(sorted(tuple(sorted(pair)) for pair in self.pairs)),
            pins=tuple(sorted(self.pins)),
            pinned=tuple(sorted(set(self.pinned))),
        )

    def code(self) -> Tuple:
        c = self.canonical()
        return c.counts, c.pairs, c.pins, c.pinned

    def layers(self) -> List[Tuple[int, int]]:
        return [(p, j) for p, n in enumerate(self.counts) for j in range(n)]


class Validity(BaseModel):
    model_config = ConfigDict(frozen=True)

    valid: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid


def empty_complex(surface: BranchedSurface) -> SplittingComplex:
    return SplittingComplex(counts=(0,) * len(surface.polygons))


def _slot_text(slot: Slot) -> str:
    return f"({slot[0]},{slot[1]},{slot[2]})"


def serialize_complex(complex_: SplittingComplex) -> str:
    c = complex_.canonical()
    lines = [ENCODING_VERSION, "counts " + " ".join(str(n) for n in c.counts)]
    lines.append("pinned " + " ".join(str(k) for k in c.pinned))
    lines.extend(f"{_slot_text(a)}~{_slot_text(b)}" for a, b in c.pairs)
    lines.extend(f"{_slot_text(a)}~p:{e}" for a, e in c.pins)
    return "\n".join(lines) + "\n"


def _parse_slot(token: str, line_number: int) -> Slot:
    token = token.strip()
    if not (token.startswith("(") and token.endswith(")")):
        raise InvalidComplexError(f"line {line_number}: malformed slot {token!r}")
    parts = token[1:-1].split(",")
    if len(parts) != 3:
        raise InvalidComplexError(f"line {line_number}: a slot has three entries")
    try:
        p, j, i = (int(x) for x in parts)
    except ValueError:
        raise InvalidComplexError(f"line {line_number}: malformed slot {token!r}")
    return p, j, i


def parse_complex(text: str) -> SplittingComplex:
    """
    Parse the sc1 text encoding.

    Raises:
        InvalidComplexError: wrong version or malformed lines
    """
    lines = [line.strip() for line in text.splitlines() if line.strip() and not line.strip().startswith("#")]
    if not lines or lines[0] != ENCODING_VERSION:
        raise InvalidComplexError(f"expected encoding version {ENCODING_VERSION}")
    counts: Optional[Tuple[int, ...]] = None
    pinned: Tuple[int, ...] = ()
    pairs: List[Tuple[Slot, Slot]] = []
    pins: List[Tuple[Slot, int]] = []
    for line_number, line in enumerate(lines[1:], start=2):
        try:
            if line.startswith("counts"):
                counts = tuple(int(x) for x in line.split()[1:])
                continue
            if line.startswith("pinned"):
                pinned = tuple(int(x) for x in line.split()[1:])
                continue
        except ValueError:
            raise InvalidComplexError(f"line {line_number}: expected integers")
        left, sep, right = line.partition("~")
        if not sep:
            raise InvalidComplexError(f"line {line_number}: expected a pairing")
        slot = _parse_slot(left, line_number)
        if right.startswith("p:"):
            try:
                pins.append((slot, int(right[2:])))
            except ValueError:
                raise InvalidComplexError(f"line {line_number}: malformed p(B) edge")
        else:
            pairs.append((slot, _parse_slot(right, line_number)))
    if counts is None:
        raise InvalidComplexError("missing counts line")
    return SplittingComplex(counts=counts, pairs=tuple(pairs), pins=tuple(pins), pinned=pinned).canonical()


@lru_cache(maxsize=256)
def side_roles(surface: BranchedSurface) -> Dict[Tuple[int, int], Tuple[int, int, bool]]:
    """(polygon, position) -> (edge, role index in the switch, flip)."""
    roles = {}
    for e, edge in enumerate(surface.edges):
        for role, side in enumerate(edge.sides):
            roles[(side.polygon, side.position)] = (e, role, side.flip)
    return roles


def height(surface: BranchedSurface, counts: Sequence[int], slot: Slot) -> int:
    """Position of a cell in the fiber order over the slot's edge."""
    p, j, i = slot
    flip = side_roles(surface)[(p, i)][2]
    return counts[p] - 1 - j if flip else j


def pinned_edges(surface: BranchedSurface, components: Iterable[int]) -> List[int]:
    members = vertical_components(surface)
    return sorted(e for k in components for e in members[k])


def side_ends(surface: BranchedSurface, polygon: int, position: int) -> Tuple[int, int]:
    """(tail corner, head corner) of a polygon side relative to its edge."""
    size = surface.polygons[polygon].size
    nxt = (position + 1) % size
    if surface.polygons[polygon].boundary[position][1] > 0:
        return position, nxt
    return nxt, position


def complex_vertices(surface: BranchedSurface, complex_: SplittingComplex) -> DisjointSet:
    """
    Vertices of the complex as classes of cell corners (P, j, c) and p(B)
    vertices (P_TOKEN, component, vertex).
    """
    vertices: DisjointSet = DisjointSet()
    for p, j in complex_.layers():
        for c in range(surface.polygons[p].size):
            vertices.add((p, j, c))
    membership = component_of(surface)
    for e in pinned_edges(surface, complex_.pinned):
        for v in surface.edge_ends[e]:
            vertices.add((P_TOKEN, membership[e], v))
    for a, b in complex_.pairs:
        a_tail, a_head = side_ends(surface, a[0], a[2])
        b_tail, b_head = side_ends(surface, b[0], b[2])
        vertices.union((a[0], a[1], a_tail), (b[0], b[1], b_tail))
        vertices.union((a[0], a[1], a_head), (b[0], b[1], b_head))
    for a, e in complex_.pins:
        tail, head = side_ends(surface, a[0], a[2])
        k = membership.get(e, -1)
        v_tail, v_head = surface.edge_ends[e]
        vertices.union((a[0], a[1], tail), (P_TOKEN, k, v_tail))
        vertices.union((a[0], a[1], head), (P_TOKEN, k, v_head))
    return vertices


def unpaired_slots(surface: BranchedSurface, complex_: SplittingComplex) -> List[Slot]:
    used = {s for pair in complex_.pairs for s in pair} | {s for s, _ in complex_.pins}
    return [
        (p, j, i)
        for p, j in complex_.layers()
        for i in range(surface.polygons[p].size)
        if (p, j, i) not in used
    ]


def _structure(surface: BranchedSurface, complex_: SplittingComplex) -> str:
    if len(complex_.counts) != len(surface.polygons) or any(n < 0 for n in complex_.counts):
        return "counts do not match the polygons"
    components = vertical_components(surface)
    if any(not 0 <= k < len(components) for k in complex_.pinned):
        return "unknown vertical boundary component"
    seen = set()
    slots = [s for pair in complex_.pairs for s in pair] + [s for s, _ in complex_.pins]
    for p, j, i in slots:
        if not 0 <= p < len(surface.polygons) or not 0 <= j < complex_.counts[p]:
            return f"no cell {p}.{j}"
        if not 0 <= i < surface.polygons[p].size:
            return f"cell {p}.{j} has no side {i}"
        if (p, j, i) in seen:
            return f"side {(p, j, i)} paired twice"
        seen.add((p, j, i))
    for _, e in complex_.pins:
        if not 0 <= e < len(surface.edges):
            return f"no edge {e}"
    return ""


def is_valid(surface: BranchedSurface, complex_: SplittingComplex) -> Validity:
    """
    Check a complex against its branched surface.

    Reasons, in checking order: "structure", "free edge", "roles",
    "p(B) pairing", "orderings", "branching".
    """
    problem = _structure(surface, complex_)
    if problem:
        return Validity(valid=False, reason=REASON_STRUCTURE)

    roles = side_roles(surface)
    # edge -> list of (merged-side height, other-side rank)
    ranks: Dict[int, List[Tuple[int, Tuple[int, int]]]] = {}
    for a, b in complex_.pairs:
        ea, ra, _ = roles[(a[0], a[2])]
        eb, rb, _ = roles[(b[0], b[2])]
        if ea != eb:
            return Validity(valid=False, reason=REASON_ROLES)
        kind = surface.edges[ea].kind
        if kind == FREE:
            return Validity(valid=False, reason=REASON_FREE_EDGE)
        if rb == 0:
            a, b, ra, rb = b, a, rb, ra
        if ra != 0 or rb == 0:
            return Validity(valid=False, reason=REASON_ROLES)
        other = (0 if rb == 1 else 2, height(surface, complex_.counts, b))
        ranks.setdefault(ea, []).append((height(surface, complex_.counts, a), other))

    wanted = set(pinned_edges(surface, complex_.pinned))
    pinned_seen: Dict[int, int] = {}
    for a, e in complex_.pins:
        ea, ra, _ = roles[(a[0], a[2])]
        if ea != e or e not in wanted or ra != 0:
            return Validity(valid=False, reason=REASON_PINS)
        pinned_seen[e] = pinned_seen.get(e, 0) + 1
        ranks.setdefault(e, []).append((height(surface, complex_.counts, a), (1, 0)))
    if any(pinned_seen.get(e, 0) != 1 for e in wanted):
        return Validity(valid=False, reason=REASON_PINS)

    for e, entries in ranks.items():
        entries.sort()
        others = [other for _, other in entries]
        if any(x >= y for x, y in zip(others, others[1:])):
            return Validity(valid=False, reason=REASON_ORDERINGS)

    vertices = complex_vertices(surface, complex_)
    seen: Dict[Tuple, set] = {}
    for p, j in complex_.layers():
        for c in range(surface.polygons[p].size):
            root = vertices.find((p, j, c))
            corners = seen.setdefault(root, set())
            if (p, c) in corners:
                return Validity(valid=False, reason=REASON_BRANCHING)
            corners.add((p, c))
    return Validity(valid=True)


def require_valid(surface: BranchedSurface, complex_: SplittingComplex) -> None:
    """
    Raises:
        InvalidComplexError: the complex fails is_valid
    """
    verdict = is_valid(surface, complex_)
    if not verdict:
        raise InvalidComplexError(f"invalid splitting complex: {verdict.reason}")
