"""
Validation report for triangulations.

All pathology is reported in the ValidationReport rather than raised.
"""

import logging
from collections import deque
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict

from .gluing import Triangulation, perm_sign
from .skeleton import build_skeleton, skeleton, vertex_links

logger = logging.getLogger(__name__)


class ValidationReport(BaseModel):
    """Summary of the combinatorial checks run on a triangulation."""

    model_config = ConfigDict(frozen=True)

    closed: bool
    orientable: bool
    manifold: bool
    euler_characteristic: int
    skeleton_counts: Tuple[int, int, int, int]
    singular_vertices: Tuple[int, ...] = ()
    reversed_edges: Tuple[int, ...] = ()


def orientation_signs(triangulation: Triangulation) -> Tuple[bool, List[int]]:
    """
    Try to orient every tetrahedron consistently.

    A gluing with permutation p between t and t' forces s(t') = -s(t)·sign(p).

    Returns:
        (orientable, signs) with one sign of +1/-1 per tetrahedron
    """
    n = triangulation.size
    signs: Dict[int, int] = {}
    for root in range(n):
        if root in signs:
            continue
        signs[root] = 1
        queue = deque([root])
        while queue:
            tet = queue.popleft()
            for face in range(4):
                gluing = triangulation.glued(tet, face)
                if gluing is None:
                    continue
                expected = -signs[tet] * perm_sign(gluing.perm)
                other = gluing.tetrahedron
                if other not in signs:
                    signs[other] = expected
                    queue.append(other)
                elif signs[other] != expected:
                    return False, []
    return True, [signs[t] for t in range(n)]


def is_orientable(triangulation: Triangulation) -> bool:
    return orientation_signs(triangulation)[0]


def validate(triangulation: Triangulation) -> ValidationReport:
    """
    Compute the validation report of a triangulation.

    manifold is true iff every vertex link is a sphere or a disk and no
    edge is identified with itself in reverse.

    Args:
        triangulation: parsed triangulation

    Returns:
        ValidationReport: closed/orientable/manifold flags, χ and counts
    """
    counts = skeleton(triangulation)
    v, e, f, t = counts
    chi = v - e + f - t

    links = vertex_links(triangulation)
    singular = tuple(link.vertex for link in links if not (link.is_sphere or link.is_disk))
    reversed_edges = build_skeleton(triangulation).reversed_edges

    report = ValidationReport(
        closed=triangulation.is_closed,
        orientable=is_orientable(triangulation),
        manifold=not singular and not reversed_edges,
        euler_characteristic=chi,
        skeleton_counts=counts,
        singular_vertices=singular,
        reversed_edges=reversed_edges,
    )
    logger.info(
        f"Validated triangulation: closed={report.closed} orientable={report.orientable} "
        f"manifold={report.manifold} chi={chi}"
    )
    return report
