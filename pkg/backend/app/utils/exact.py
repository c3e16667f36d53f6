"""
Exact arithmetic helpers.

Thin wrappers around sympy's rational simplex solver and sympy matrices,
plus integer normalization used by every cone and box computation.
All values returned are Python ints or fractions.Fraction, never floats.
"""

import logging
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix, Rational
from sympy.solvers.simplex import InfeasibleLPError, UnboundedLPError, linprog

logger = logging.getLogger(__name__)

Row = Sequence[int]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def primitive(vector: Sequence[int]) -> Tuple[int, ...]:
    """Divide a nonnegative integer vector by the gcd of its entries."""
    divisor = reduce(gcd, (abs(x) for x in vector), 0)
    if divisor <= 1:
        return tuple(int(x) for x in vector)
    return tuple(int(x) // divisor for x in vector)


def dot(row: Row, vector: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(row, vector))


def _to_fraction(value) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def maximize(
    objective: Row,
    equalities: Sequence[Row],
    rhs: Sequence[int],
) -> Tuple[str, Optional[Fraction], Optional[List[Fraction]]]:
    """
    Maximize objective·x subject to equalities·x = rhs and x >= 0.

    Args:
        objective: integer objective coefficients
        equalities: rows of the equality system
        rhs: right-hand side, one entry per row

    Returns:
        (status, value, point) where status is one of
        "optimal", "infeasible", "unbounded"
    """
    width = len(objective)
    if width == 0:
        feasible = all(b == 0 for b in rhs)
        return (OPTIMAL, Fraction(0), []) if feasible else (INFEASIBLE, None, None)

    minimize_c = [-int(c) for c in objective]
    # linprog needs an inequality block of matching width; 0·x <= 0 always holds
    trivial_a, trivial_b = [[0] * width], [0]
    a_eq = [list(map(int, row)) for row in equalities] or None
    b_eq = [int(b) for b in rhs] if equalities else None
    try:
        value, point = linprog(minimize_c, A=trivial_a, b=trivial_b, A_eq=a_eq, b_eq=b_eq)
    except InfeasibleLPError:
        return INFEASIBLE, None, None
    except UnboundedLPError:
        return UNBOUNDED, None, None

    return OPTIMAL, -_to_fraction(value), [_to_fraction(x) for x in point]


def is_feasible(equalities: Sequence[Row], rhs: Sequence[int], width: int) -> bool:
    """Exact feasibility of {x >= 0 : equalities·x = rhs}."""
    status, _, _ = maximize([0] * width, equalities, rhs)
    return status != INFEASIBLE


def has_positive_solution(equalities: Sequence[Row], width: int) -> bool:
    """
    Whether the homogeneous system admits a strictly positive rational point.

    Substitutes x = 1 + y with y >= 0; by homogeneity any positive rational
    solution scales to one with every entry at least 1.
    """
    if width == 0:
        return True
    shifted_rhs = [-sum(row) for row in equalities]
    return is_feasible(equalities, shifted_rhs, width)


def coordinate_maxima(
    equalities: Sequence[Row],
    rhs: Sequence[int],
    width: int,
) -> Tuple[str, List[Optional[int]]]:
    """
    Per-coordinate integer maxima of the polyhedron {x >= 0 : Ax = b}.

    Returns:
        (status, maxima) where status is "infeasible", "unbounded" or
        "optimal"; unbounded coordinates carry None.
    """
    if not is_feasible(equalities, rhs, width):
        return INFEASIBLE, []

    maxima: List[Optional[int]] = []
    status = OPTIMAL
    for index in range(width):
        objective = [1 if j == index else 0 for j in range(width)]
        outcome, value, _ = maximize(objective, equalities, rhs)
        if outcome == UNBOUNDED:
            status = UNBOUNDED
            maxima.append(None)
        else:
            maxima.append(int(value // 1))
    return status, maxima


def rank(rows: Sequence[Row]) -> int:
    """Exact rank of an integer matrix."""
    if not rows:
        return 0
    return Matrix([list(row) for row in rows]).rank()
