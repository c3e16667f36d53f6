"""
Tests for the exact linear-programming helpers and the branched-surface
queries built on them, with and without equality rows.

Run with: pytest backend/tests/test_exact.py -v
"""

from fractions import Fraction

import pytest

from services.branched import fully_carries_positive, parse_branched_surface
from utils.exact import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    coordinate_maxima,
    has_positive_solution,
    is_feasible,
    maximize,
    primitive,
)

# one smooth torus sector: the branch system has no rows at all
SMOOTH_TORUS = """
polygon 0: 0+ 1+ 0- 1-
edge 0 smooth 0.0 0.2
edge 1 smooth 0.1 0.3
"""


class TestMaximize:

    def test_no_equations_bounded(self):
        status, value, point = maximize([-1, -1], [], [])
        assert status == OPTIMAL
        assert value == 0
        assert point == [0, 0]

    def test_no_equations_unbounded(self):
        assert maximize([1, 0], [], [])[0] == UNBOUNDED

    def test_with_equations(self):
        status, value, _ = maximize([1, 1], [[1, 1]], [3])
        assert status == OPTIMAL
        assert value == 3

    def test_fractional_optimum_is_exact(self):
        status, value, _ = maximize([1, 0], [[2, 1]], [3])
        assert status == OPTIMAL
        assert value == Fraction(3, 2)

    def test_infeasible(self):
        assert maximize([1, 1], [[1, 1]], [-1])[0] == INFEASIBLE

    def test_empty_objective(self):
        assert maximize([], [], []) == (OPTIMAL, Fraction(0), [])


class TestFeasibility:

    def test_no_equations(self):
        assert is_feasible([], [], 3)

    def test_with_equations(self):
        assert is_feasible([[1, -1]], [2], 2)
        assert not is_feasible([[1, 1]], [-1], 2)

    @pytest.mark.parametrize(
        "rows, width, expected",
        [
            ([], 2, True),
            ([[1, -1, -1]], 3, True),
            ([[0, -1]], 2, False),
            ([[1, 1]], 2, False),
        ],
    )
    def test_positive_solution(self, rows, width, expected):
        assert has_positive_solution(rows, width) is expected


class TestCoordinateMaxima:

    def test_no_equations_is_unbounded(self):
        assert coordinate_maxima([], [], 2) == (UNBOUNDED, [None, None])

    def test_bounded_box(self):
        assert coordinate_maxima([[2, 1]], [3], 2) == (OPTIMAL, [1, 3])

    def test_one_free_direction(self):
        assert coordinate_maxima([[1, -1, 0], [0, 0, 1]], [0, 2], 3) == (UNBOUNDED, [None, None, 2])

    def test_infeasible(self):
        assert coordinate_maxima([[1, 1]], [-1], 2) == (INFEASIBLE, [])


class TestBranchedQueries:

    def test_surface_without_branch_rows(self):
        assert fully_carries_positive(parse_branched_surface(SMOOTH_TORUS))

    def test_surface_with_branch_row(self, sink_disk_surface):
        assert fully_carries_positive(sink_disk_surface)


def test_primitive():
    assert primitive([2, 4, 0]) == (1, 2, 0)
    assert primitive([0, 0]) == (0, 0)
