"""
Tests for gluing tables, skeleton and validation.

Run with: pytest backend/tests/test_tri.py -v
"""

from itertools import product

import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from services.tri import (
    IDENTITY,
    TriangulationParseError,
    automorphisms,
    is_orientable,
    parse_triangulation,
    perm_compose,
    perm_inverse,
    perm_sign,
    serialize_triangulation,
    skeleton,
    validate,
    vertex_links,
)
from conftest import BALL, DOUBLED_TETRAHEDRON, closed_two_tetrahedra


class TestParseTriangulation:
    """Gluing-table parsing and its error reporting."""

    def test_ball_has_four_boundary_faces(self, ball):
        assert ball.size == 1
        assert all(ball.glued(0, face) is None for face in range(4))

    def test_doubled_tetrahedron_is_closed(self, doubled_tetrahedron):
        assert doubled_tetrahedron.size == 2
        assert doubled_tetrahedron.is_closed

    def test_comments_and_blank_lines_are_skipped(self):
        text = "# doubled tetrahedron\n\n" + DOUBLED_TETRAHEDRON
        assert parse_triangulation(text) == parse_triangulation(DOUBLED_TETRAHEDRON)

    def test_face_glued_to_itself_is_rejected(self):
        with pytest.raises(TriangulationParseError) as info:
            parse_triangulation("1\n0:0:0123 bdry bdry bdry")
        assert info.value.line_number == 2
        assert "itself" in info.value.reason

    def test_non_involutive_gluing_is_rejected(self):
        with pytest.raises(TriangulationParseError, match="not involutive"):
            parse_triangulation("2\n1:0:0123 bdry bdry bdry\nbdry bdry bdry bdry")

    def test_non_permutation_is_rejected(self):
        with pytest.raises(TriangulationParseError, match="non-permutation"):
            parse_triangulation("2\n1:0:0023 bdry bdry bdry\n0:0:0123 bdry bdry bdry")

    def test_out_of_range_tetrahedron(self):
        with pytest.raises(TriangulationParseError, match="out of range"):
            parse_triangulation("1\n3:0:0123 bdry bdry bdry")

    def test_wrong_line_count_reports_line(self):
        with pytest.raises(TriangulationParseError) as info:
            parse_triangulation("2\nbdry bdry bdry bdry")
        assert info.value.line_number == 2

    def test_empty_document(self):
        with pytest.raises(TriangulationParseError, match="empty"):
            parse_triangulation("# nothing\n")

    def test_serialization_is_canonical(self):
        messy = "# c\n2\n1:0:0123  1:1:0123 1:2:0123 1:3:0123\n\n0:0:0123 0:1:0123 0:2:0123 0:3:0123\n"
        assert serialize_triangulation(parse_triangulation(messy)) == DOUBLED_TETRAHEDRON
        assert serialize_triangulation(parse_triangulation(BALL)) == BALL


class TestSkeleton:

    def test_doubled_tetrahedron_counts(self, doubled_tetrahedron):
        assert skeleton(doubled_tetrahedron) == (4, 6, 4, 2)

    def test_ball_counts(self, ball):
        assert skeleton(ball) == (4, 6, 4, 1)

    def test_empty_triangulation(self):
        assert skeleton(parse_triangulation("0")) == (0, 0, 0, 0)

    def test_vertex_links_of_closed_manifold_are_spheres(self, doubled_tetrahedron):
        links = vertex_links(doubled_tetrahedron)
        assert len(links) == 4
        assert all(link.is_sphere for link in links)

    def test_vertex_links_of_ball_are_disks(self, ball):
        assert all(link.is_disk for link in vertex_links(ball))

    def test_automorphisms_start_with_identity(self, doubled_tetrahedron):
        found = automorphisms(doubled_tetrahedron)
        assert found[0] == ((0, IDENTITY), (1, IDENTITY))
        # 24 vertex permutations times the swap of the two tetrahedra
        assert len(found) == 48


class TestValidate:

    def test_doubled_tetrahedron(self, doubled_tetrahedron):
        report = validate(doubled_tetrahedron)
        assert report.closed and report.manifold and report.orientable
        assert report.euler_characteristic == 0

    def test_ball(self, ball):
        report = validate(ball)
        assert not report.closed
        assert report.manifold
        assert report.euler_characteristic == 1

    def test_chi_matches_counts(self, doubled_tetrahedron, ball):
        for triangulation in (doubled_tetrahedron, ball):
            report = validate(triangulation)
            v, e, f, t = report.skeleton_counts
            assert report.euler_characteristic == v - e + f - t


def _brute_force_orientable(triangulation) -> bool:
    for signs in product((1, -1), repeat=triangulation.size):
        consistent = True
        for tet in range(triangulation.size):
            for face in range(4):
                gluing = triangulation.glued(tet, face)
                if gluing is not None and signs[gluing.tetrahedron] != -signs[tet] * perm_sign(gluing.perm):
                    consistent = False
        if consistent:
            return True
    return False


class TestOrientability:

    @hypothesis_settings(max_examples=60, deadline=None)
    @given(closed_two_tetrahedra())
    def test_agrees_with_brute_force(self, triangulation):
        assert is_orientable(triangulation) == _brute_force_orientable(triangulation)

    @given(st.permutations([0, 1, 2, 3]))
    def test_inverse_composes_to_identity(self, perm):
        perm = tuple(perm)
        assert perm_compose(perm, perm_inverse(perm)) == IDENTITY
        assert perm_sign(perm) * perm_sign(perm_inverse(perm)) == 1
