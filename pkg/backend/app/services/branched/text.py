"""
Text format for branched surfaces.

    # comment
    polygon 0: 0+
    polygon 1: 0+ 1+ 2+ 1-
    edge 0 branch 0.0 1.0 2.0~
    edge 1 smooth 1.1 1.3
    edge 2 free 1.2
    cut 0.0
    origin text
    selection 0:0,1,2,3;1:0,1,2,3

Polygon sides are edge ids with the traversal sign. Edge sides are
polygon.position, with "~" marking a reversed vertical order; branch
edges list merged, smooth and cusp sides in that order. Cut lines fix the
fiber cut of the vertex their corners lie on; vertices without one get
the default cut. The selection line is only honored when a triangulation
is supplied, in which case the surface must match its normal construction.
"""

import logging
from typing import List, Optional, Tuple

from services.tri import Triangulation
from .construction import DiskSelection, format_selection, from_disk_types, parse_selection
from .model import (
    ORIGIN_TEXT,
    BranchedSurface,
    Corner,
    Edge,
    MalformedBranchedSurfaceError,
    Polygon,
    SideRef,
    assemble,
)

logger = logging.getLogger(__name__)


def _fail(line_number: int, reason: str) -> MalformedBranchedSurfaceError:
    return MalformedBranchedSurfaceError(f"line {line_number}: {reason}")


def _side_token(side: SideRef) -> str:
    return f"{side.polygon}.{side.position}{'~' if side.flip else ''}"


def _corner_token(corner: Corner) -> str:
    return f"{corner[0]}.{corner[1]}"


def serialize_branched_surface(surface: BranchedSurface, include_selection: bool = True) -> str:
    lines = []
    for p, polygon in enumerate(surface.polygons):
        sides = " ".join(f"{e}{'+' if o > 0 else '-'}" for e, o in polygon.boundary)
        lines.append(f"polygon {p}: {sides}")
    for e, edge in enumerate(surface.edges):
        lines.append(f"edge {e} {edge.kind} " + " ".join(_side_token(s) for s in edge.sides))
    for cut in surface.cuts:
        lines.append("cut " + " ".join(_corner_token(c) for c in cut))
    lines.append(f"origin {surface.origin}")
    if surface.filter_passed:
        lines.append("filter passed")
    if include_selection and surface.embedding is not None:
        lines.append(f"selection {format_selection(DiskSelection(types=surface.embedding.selection))}")
    return "\n".join(lines) + "\n"


def _parse_pair(token: str, line_number: int) -> Tuple[int, int, bool]:
    flip = token.endswith("~")
    body = token[:-1] if flip else token
    head, sep, tail = body.partition(".")
    if not sep:
        raise _fail(line_number, f"expected polygon.position, got {token!r}")
    try:
        return int(head), int(tail), flip
    except ValueError:
        raise _fail(line_number, f"expected polygon.position, got {token!r}")


def parse_branched_surface(text: str, triangulation: Optional[Triangulation] = None) -> BranchedSurface:
    """
    Parse the text format.

    Args:
        text: branched surface document
        triangulation: when given together with a selection line, the
            surface is rebuilt with its normal embedding

    Raises:
        MalformedBranchedSurfaceError: syntax errors, ids out of order, or
            cells and switches that do not fit together
    """
    polygons: List[Polygon] = []
    edges: List[Edge] = []
    cuts: List[List[Corner]] = []
    origin = ORIGIN_TEXT
    filter_passed = False
    selection_text: Optional[str] = None

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "polygon":
            label, sep, body = rest.partition(":")
            if not sep or label.strip() != str(len(polygons)):
                raise _fail(line_number, f"expected polygon {len(polygons)}")
            boundary = []
            for token in body.split():
                if token[-1:] not in "+-" or not token[:-1].isdigit():
                    raise _fail(line_number, f"bad polygon side {token!r}")
                boundary.append((int(token[:-1]), 1 if token[-1] == "+" else -1))
            polygons.append(Polygon(boundary=tuple(boundary)))
        elif keyword == "edge":
            tokens = rest.split()
            if len(tokens) < 2 or tokens[0] != str(len(edges)):
                raise _fail(line_number, f"expected edge {len(edges)}")
            sides = []
            for token in tokens[2:]:
                p, j, flip = _parse_pair(token, line_number)
                sides.append(SideRef(polygon=p, position=j, flip=flip))
            edges.append(Edge(kind=tokens[1], sides=tuple(sides)))
        elif keyword == "cut":
            corners = []
            for token in rest.split():
                p, c, flip = _parse_pair(token, line_number)
                if flip:
                    raise _fail(line_number, "cut corners take no flip mark")
                corners.append((p, c))
            cuts.append(corners)
        elif keyword == "origin":
            origin = rest
        elif keyword == "filter":
            filter_passed = rest == "passed"
        elif keyword == "selection":
            selection_text = rest
        else:
            raise _fail(line_number, f"unknown keyword {keyword!r}")

    for hint in cuts:
        for p, c in hint:
            if not 0 <= p < len(polygons) or not 0 <= c < polygons[p].size:
                raise MalformedBranchedSurfaceError(f"cut corner {p}.{c} does not exist")

    surface = assemble(polygons, edges, cut_hints=cuts, origin=origin)
    if selection_text is not None and triangulation is not None:
        built = from_disk_types(triangulation, parse_selection(selection_text))
        expected = serialize_branched_surface(built, include_selection=False).split("origin")[0]
        found = serialize_branched_surface(surface, include_selection=False).split("origin")[0]
        if expected != found:
            raise MalformedBranchedSurfaceError("cells do not match the normal construction of the selection")
        surface = built.with_flags(origin=origin)
    if filter_passed:
        surface = surface.with_flags(filter_passed=True)
    logger.debug(f"Parsed branched surface with {len(polygons)} polygons and {len(edges)} edges")
    return surface
