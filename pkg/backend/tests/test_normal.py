"""
Tests for normal coordinates, matching equations and vertex solutions.

Run with: pytest backend/tests/test_normal.py -v
"""

from itertools import product
from math import lcm

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings
from sympy import Matrix

from services.normal import (
    DISK_TYPES,
    SPHERE,
    TORUS,
    InadmissibleVectorError,
    NormalVector,
    PreconditionError,
    classify,
    euler_characteristic,
    format_normal_vector,
    is_admissible,
    is_vertex_link,
    matching_residual,
    matching_system,
    normal_tori,
    parse_normal_vector,
    reconstruct_components,
    vertex_link_vectors,
    vertex_solution_records,
    vertex_solutions,
    weight,
    zero_efficiency_report,
)
from utils.exact import primitive
from conftest import closed_two_tetrahedra


def _admissible_supports(tetrahedra: int):
    """Every support with at most one quad type per tetrahedron."""
    per_tet = []
    for t in range(tetrahedra):
        options = []
        for triangles in product((False, True), repeat=4):
            chosen = [DISK_TYPES * t + v for v in range(4) if triangles[v]]
            options.append(chosen)
            options.extend(chosen + [DISK_TYPES * t + q] for q in (4, 5, 6))
        per_tet.append(options)
    for parts in product(*per_tet):
        support = [index for part in parts for index in part]
        if support:
            yield support


def _vertex_solutions_by_support(triangulation):
    """Extreme rays found by rank: the kernel on the support is a positive line."""
    width = DISK_TYPES * triangulation.size
    rows = np.array(matching_system(triangulation).rows(), dtype=np.int64).reshape(-1, width)
    found = set()
    for support in _admissible_supports(triangulation.size):
        columns = rows[:, support]
        rank = np.linalg.matrix_rank(columns) if columns.shape[0] else 0
        if rank != len(support) - 1:
            continue
        if columns.shape[0]:
            kernel = Matrix(columns.tolist()).nullspace()[0]
            scale = lcm(*[entry.q for entry in kernel])
            entries = [int(entry * scale) for entry in kernel]
        else:
            entries = [1]
        if all(e < 0 for e in entries):
            entries = [-e for e in entries]
        if not all(e > 0 for e in entries):
            continue
        coords = [0] * width
        for index, value in zip(support, entries):
            coords[index] = value
        found.add(primitive(coords))
    return found


class TestMatchingSystem:

    def test_ball_has_no_equations(self, ball):
        assert matching_system(ball).equations == ()

    def test_closed_pair_has_three_equations_per_face(self, doubled_tetrahedron):
        system = matching_system(doubled_tetrahedron)
        assert len(system.equations) == 12
        assert system.width == 2 * DISK_TYPES

    def test_coefficient_pattern(self, doubled_tetrahedron):
        for equation in matching_system(doubled_tetrahedron).equations:
            assert sorted(value for _, value in equation.coefficients) == [-1, -1, 1, 1]

    def test_equation_order(self, doubled_tetrahedron):
        keys = [(eq.face_class, eq.arc_type) for eq in matching_system(doubled_tetrahedron).equations]
        assert keys == sorted(keys)


class TestNormalVector:

    def test_parse_and_format(self):
        vector = parse_normal_vector("1,0,0,0,0,0,0")
        assert vector.get(0, 0) == 1
        assert format_normal_vector(vector) == "1,0,0,0,0,0,0"

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            parse_normal_vector("1,0,0")

    def test_rejects_negative_entries(self):
        with pytest.raises(ValueError):
            NormalVector(coords=(-1, 0, 0, 0, 0, 0, 0))

    def test_two_quads_are_not_admissible(self, ball):
        vector = NormalVector.from_support(1, [(0, 4), (0, 5)])
        assert not vector.is_quad_compatible()
        assert not is_admissible(ball, vector)


class TestVertexSolutions:

    def test_ball_solutions_are_single_disks(self, ball):
        solutions = vertex_solutions(ball)
        assert all(sum(v.coords) == 1 for v in solutions)
        for triangle in range(4):
            assert NormalVector.from_support(1, [(0, triangle)]) in solutions

    def test_closed_pair_contains_vertex_links(self, doubled_tetrahedron):
        solutions = vertex_solutions(doubled_tetrahedron)
        links = vertex_link_vectors(doubled_tetrahedron)
        assert len(links) == 4
        assert all(link in solutions for link in links)

    def test_solutions_are_nonzero_and_match(self, doubled_tetrahedron):
        for vector in vertex_solutions(doubled_tetrahedron):
            assert not vector.is_zero()
            assert vector.is_quad_compatible()
            assert all(value == 0 for value in matching_residual(doubled_tetrahedron, vector))

    def test_output_is_sorted_and_duplicate_free(self, doubled_tetrahedron):
        coords = [v.coords for v in vertex_solutions(doubled_tetrahedron)]
        assert coords == sorted(set(coords))

    @pytest.mark.parametrize("name", ["ball", "doubled_tetrahedron"])
    def test_agrees_with_support_oracle(self, name, request):
        triangulation = request.getfixturevalue(name)
        assert {v.coords for v in vertex_solutions(triangulation)} == _vertex_solutions_by_support(triangulation)

    @hypothesis_settings(max_examples=5, deadline=None)
    @given(closed_two_tetrahedra())
    def test_random_pairs_agree_with_support_oracle(self, triangulation):
        assert {v.coords for v in vertex_solutions(triangulation)} == _vertex_solutions_by_support(triangulation)

    def test_records_flag_vertex_links(self, doubled_tetrahedron):
        records = vertex_solution_records(doubled_tetrahedron)
        assert sum(1 for r in records if r.vertex_link) == 4

    def test_is_vertex_link(self, doubled_tetrahedron):
        link = vertex_link_vectors(doubled_tetrahedron)[0]
        assert is_vertex_link(doubled_tetrahedron, link)
        assert not is_vertex_link(doubled_tetrahedron, link.scaled(2))


class TestSurfaceFunctionals:

    def test_vertex_link_is_a_sphere(self, doubled_tetrahedron):
        link = vertex_link_vectors(doubled_tetrahedron)[0]
        assert euler_characteristic(doubled_tetrahedron, link) == 2
        parts = reconstruct_components(doubled_tetrahedron, link)
        assert len(parts) == 1
        assert parts[0].classification == SPHERE

    def test_vertex_link_weight(self, doubled_tetrahedron):
        # the link meets each of the three edge classes at its vertex once
        link = vertex_link_vectors(doubled_tetrahedron)[0]
        assert weight(doubled_tetrahedron, link) == 3

    def test_zero_vector_has_no_weight(self, doubled_tetrahedron):
        assert weight(doubled_tetrahedron, NormalVector.zero(2)) == 0

    def test_two_links_are_two_spheres(self, doubled_tetrahedron):
        first, second = vertex_link_vectors(doubled_tetrahedron)[:2]
        parts = reconstruct_components(doubled_tetrahedron, first + second)
        assert [p.classification for p in parts] == [SPHERE, SPHERE]

    def test_functionals_are_linear(self, doubled_tetrahedron):
        first, second = vertex_link_vectors(doubled_tetrahedron)[:2]
        total = first.scaled(2) + second
        assert euler_characteristic(doubled_tetrahedron, total) == 3 * 2
        assert weight(doubled_tetrahedron, total) == 2 * weight(doubled_tetrahedron, first) + weight(doubled_tetrahedron, second)

    def test_inadmissible_vector_is_rejected(self, doubled_tetrahedron):
        with pytest.raises(InadmissibleVectorError):
            weight(doubled_tetrahedron, NormalVector.from_support(2, [(0, 0)]))

    @pytest.mark.parametrize(
        "chi, boundary, orientable, expected",
        [(2, 0, True, SPHERE), (0, 0, True, TORUS), (1, 1, True, "Disk"), (0, 2, True, "Annulus")],
    )
    def test_classify(self, chi, boundary, orientable, expected):
        assert classify(chi, boundary, orientable) == expected


class TestReports:

    def test_links_are_flagged_in_zero_efficiency_report(self, doubled_tetrahedron):
        report = zero_efficiency_report(doubled_tetrahedron)
        flagged = {entry.vector for entry in report.spheres if entry.vertex_link}
        assert flagged == {format_normal_vector(v) for v in vertex_link_vectors(doubled_tetrahedron)}
        assert report.exceptional == len(report.spheres) - 4
        assert report.zero_efficient_evidence == (report.exceptional == 0)

    def test_no_vertex_tori_in_closed_pair(self, doubled_tetrahedron):
        assert normal_tori(doubled_tetrahedron) == []

    def test_reports_need_closed_input(self, ball):
        with pytest.raises(PreconditionError):
            zero_efficiency_report(ball)
        with pytest.raises(PreconditionError):
            normal_tori(ball)
