"""
Extreme rays of {x >= 0 : Ax = 0} by incremental double description.

Rays are kept as tuples of Python ints; every combination step is exact and
each new ray is reduced to coprime coordinates. Zero sets are tracked as a
numpy boolean matrix so the combinatorial adjacency test is vectorized.
"""

import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .exact import dot, primitive

logger = logging.getLogger(__name__)

Ray = Tuple[int, ...]


class ConeEnumerationError(Exception):
    """Raised when the ray count exceeds the configured cap."""
    pass


def _adjacent(zeros: np.ndarray, i: int, j: int) -> bool:
    """
    Combinatorial adjacency: no third ray vanishes on every coordinate
    where both i and j vanish.
    """
    common = zeros[i] & zeros[j]
    covering = np.all(zeros[:, common], axis=1)
    covering[i] = False
    covering[j] = False
    return not covering.any()


def extreme_rays(
    equations: Sequence[Sequence[int]],
    width: int,
    prune: Optional[Callable[[Ray], bool]] = None,
    max_rays: int = 200000,
) -> List[Ray]:
    """
    Enumerate the extreme rays of the cone {x >= 0 : equations·x = 0}.

    Args:
        equations: integer rows, each of length width
        width: number of coordinates
        prune: optional predicate rejecting rays; it must be monotone under
            support inclusion (a rejected support stays rejected when enlarged)
        max_rays: abort once an intermediate ray set grows beyond this

    Returns:
        List of coprime integer rays in lexicographic order

    Raises:
        ConeEnumerationError: intermediate ray count above max_rays
    """
    rays: List[Ray] = [tuple(1 if j == i else 0 for j in range(width)) for i in range(width)]
    if prune is not None:
        rays = [r for r in rays if not prune(r)]

    for step, row in enumerate(equations):
        if not any(row):
            continue
        values = [dot(row, r) for r in rays]
        zero = [r for r, v in zip(rays, values) if v == 0]
        positive = [(r, v) for r, v in zip(rays, values) if v > 0]
        negative = [(r, v) for r, v in zip(rays, values) if v < 0]

        zeros = np.array([[x == 0 for x in r] for r in rays], dtype=bool).reshape(len(rays), width)
        index = {r: i for i, r in enumerate(rays)}

        combined = set()
        for p, vp in positive:
            for n, vn in negative:
                if not _adjacent(zeros, index[p], index[n]):
                    continue
                ray = primitive(tuple(vp * b - vn * a for a, b in zip(p, n)))
                if prune is not None and prune(ray):
                    continue
                combined.add(ray)

        rays = sorted(set(zero) | combined)
        logger.debug(f"Double description step {step}: {len(rays)} rays")
        if len(rays) > max_rays:
            raise ConeEnumerationError(f"ray count {len(rays)} exceeds cap {max_rays}")

    return sorted(rays)
