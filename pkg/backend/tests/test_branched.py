"""
Tests for branched surfaces: text format, branch equations, carried-surface
queries, complementary blocks, laminarity checks and splitting.

Run with: pytest backend/tests/test_branched.py -v
"""

from itertools import permutations, product

import pytest

from services.branched import (
    BranchedSurfaceError,
    DiskSelection,
    MalformedBranchedSurfaceError,
    MissingEmbeddingError,
    ProvenanceError,
    UnboundedSystemError,
    UnknownComponentError,
    box_solutions,
    branch_system,
    candidates,
    carried_closed_vertex_surfaces,
    carried_support,
    carries_sphere_or_torus,
    collapse_bubble,
    complement_blocks,
    disks_of_contact,
    drop_disk_types,
    from_disk_types,
    fully_carries_positive,
    horizontal_boundary,
    incompressible_reebless_report,
    is_laminar_splitting,
    laminar_check,
    parse_branched_surface,
    parse_selection,
    format_selection,
    sectors,
    serialize_branched_surface,
    sink_disks,
    splitting_annuli,
    to_normal_vector,
    trivial_bubbles,
    vertical_components,
)
from services.branched.split import complex_from_weights, split
from services.normal import DISK_TYPES, PreconditionError, matching_system
from services.splitting import InvalidComplexError, empty_complex, is_valid
from utils.exact import dot
from conftest import SINK_DISK_SURFACE

ALL_TRIANGLES = DiskSelection.of([[0, 1, 2, 3], [0, 1, 2, 3]])
MIXED_QUADS = DiskSelection.of([[0, 1, 2, 3, 4], [0, 1, 2, 3, 5]])

# one branch circle; polygon 0 is a disk, polygon 2 a disk or a cusp annulus
SWITCH_FAMILY = """
polygon 0: 0+
polygon 1: 0+ 1+ 2+ 1-
{third}
edge 0 branch {sides}
edge 1 smooth 1.1 1.3
edge 2 free 1.2
{extra}"""


def _switch_family():
    for disk in (False, True):
        third = "polygon 2: 0+" if disk else "polygon 2: 0+ 3+ 4+ 3-"
        extra = "" if disk else "edge 3 smooth 2.1 2.3\nedge 4 free 2.2\n"
        for order in permutations((0, 1, 2)):
            sides = " ".join(f"{p}.0" for p in order)
            yield SWITCH_FAMILY.format(third=third, sides=sides, extra=extra), order, disk


def _sinks_by_boundary_scan(order, third_is_disk):
    """A one-sided polygon is a sink exactly when it is listed first at its branch switch."""
    disks = {0, 2} if third_is_disk else {0}
    return [order[0]] if order[0] in disks else []


def _matching_solutions_on(triangulation, selection, bound):
    """Normal vectors supported on a selection with entries up to bound, by exhaustion."""
    rows = matching_system(triangulation).rows()
    support = [DISK_TYPES * t + d for t, block in enumerate(selection.types) for d in block]
    found = set()
    for values in product(range(bound + 1), repeat=len(support)):
        coords = [0] * (DISK_TYPES * triangulation.size)
        for index, value in zip(support, values):
            coords[index] = value
        if all(dot(row, coords) == 0 for row in rows):
            found.add(tuple(coords))
    return found


class TestTextFormat:

    def test_serialized_surface_parses_back(self, sink_disk_surface):
        again = parse_branched_surface(serialize_branched_surface(sink_disk_surface))
        assert again.polygons == sink_disk_surface.polygons
        assert again.edges == sink_disk_surface.edges
        assert again.filter_passed

    def test_side_on_wrong_edge(self):
        text = SINK_DISK_SURFACE.replace("edge 1 smooth 1.1 1.3", "edge 1 smooth 1.1 1.2")
        with pytest.raises(MalformedBranchedSurfaceError):
            parse_branched_surface(text)

    def test_unknown_keyword(self):
        with pytest.raises(MalformedBranchedSurfaceError, match="unknown keyword"):
            parse_branched_surface(SINK_DISK_SURFACE + "vertex 0\n")

    def test_branch_switch_needs_three_sides(self):
        text = SINK_DISK_SURFACE.replace("edge 0 branch 0.0 1.0 2.0", "edge 0 branch 0.0 1.0")
        with pytest.raises(MalformedBranchedSurfaceError, match="needs 3 sides"):
            parse_branched_surface(text)

    def test_selection_round_trip(self):
        assert parse_selection(format_selection(ALL_TRIANGLES)) == ALL_TRIANGLES


class TestBranchEquations:

    def test_sectors_of_sink_fixture(self, sink_disk_surface):
        found = sectors(sink_disk_surface)
        assert [s.polygons for s in found] == [(0,), (1,), (2,)]
        assert found[0].is_disk
        assert not found[1].is_disk

    def test_one_homogeneous_row(self, sink_disk_surface):
        system = branch_system(sink_disk_surface)
        assert system.rows == ((1, -1, -1),)
        assert system.homogeneous

    def test_boundary_spec_adds_constant(self, sink_disk_surface):
        system = branch_system(sink_disk_surface, {0: 1})
        assert system.rhs == (1,)
        assert not system.homogeneous

    def test_unknown_component(self, sink_disk_surface):
        with pytest.raises(UnknownComponentError):
            branch_system(sink_disk_surface, {3: 1})

    def test_positive_solution_of_sink_fixture(self, sink_disk_surface):
        # w(D) = w(A) + w(E) holds at (2, 1, 1)
        assert fully_carries_positive(sink_disk_surface)

    def test_forced_zero_weight(self, torus_surface):
        # the annulus meets itself and D: w(A) = w(A) + w(D) forces w(D) = 0
        system = branch_system(torus_surface)
        assert system.rows == ((0, -1),)
        assert not fully_carries_positive(torus_surface)


class TestCarriedSurfaces:

    def test_sink_disk(self, sink_disk_surface, no_sink_surface):
        assert sink_disks(sink_disk_surface) == [0]
        assert sink_disks(no_sink_surface) == []

    @pytest.mark.parametrize("text, order, third_is_disk", list(_switch_family()))
    def test_sink_disks_match_boundary_scan(self, text, order, third_is_disk):
        assert sink_disks(parse_branched_surface(text)) == _sinks_by_boundary_scan(order, third_is_disk)

    def test_disk_of_contact_cusps_into_disk(self, sink_disk_surface):
        contacts = disks_of_contact(sink_disk_surface)
        assert [(c.components, c.weights) for c in contacts] == [((0,), (1, 0, 0))]

    def test_no_disk_of_contact_when_cusp_points_away(self, no_sink_surface):
        assert disks_of_contact(no_sink_surface) == []

    def test_torus_is_carried(self, torus_surface):
        assert carries_sphere_or_torus(torus_surface)
        assert not fully_carries_positive(torus_surface)

    def test_vertical_components(self, two_component_surface):
        assert vertical_components(two_component_surface) == ((0,), (2,))

    def test_unique_splitting_annulus(self, two_component_surface):
        annuli = splitting_annuli(two_component_surface, 0, 1)
        assert [a.weights for a in annuli] == [(1, 0, 0, 0, 0)]

    def test_disk_of_contact_on_first_component(self, two_component_surface):
        contacts = disks_of_contact(two_component_surface)
        assert any(c.components == (0,) and c.weights == (1, 0, 1, 0, 0) for c in contacts)

    def test_splitting_annuli_match_exhaustive_search(self, two_component_surface):
        system = branch_system(two_component_surface, {0: 1, 1: 1}, closed=True)
        expected = [
            w for w in product(range(7), repeat=system.variables)
            if not any(system.residual(w)) and system.euler_characteristic(w) == 0
        ]
        assert [a.weights for a in splitting_annuli(two_component_surface, 0, 1)] == expected

    def test_nested_annuli_differ_by_a_closed_surface(self, two_component_with_torus):
        relative = branch_system(two_component_with_torus, {0: 1, 1: 1}, closed=True)
        homogeneous = branch_system(two_component_with_torus, closed=True)
        annuli = [
            w for w in product(range(5), repeat=relative.variables)
            if not any(relative.residual(w)) and relative.euler_characteristic(w) == 0
        ]
        nested = [(a, b) for a in annuli for b in annuli if a != b and all(x <= y for x, y in zip(a, b))]
        assert nested
        for smaller, larger in nested:
            difference = [y - x for x, y in zip(smaller, larger)]
            assert not any(homogeneous.residual(difference))
            assert homogeneous.euler_characteristic(difference) == 0

    def test_unbounded_annulus_system(self, two_component_with_torus):
        with pytest.raises(UnboundedSystemError):
            splitting_annuli(two_component_with_torus, 0, 1)

    def test_annulus_needs_distinct_components(self, two_component_surface):
        with pytest.raises(BranchedSurfaceError):
            splitting_annuli(two_component_surface, 1, 1)
        with pytest.raises(UnknownComponentError):
            splitting_annuli(two_component_surface, 0, 5)


class TestLaminarity:

    def test_sink_disk_is_not_laminar(self, sink_disk_surface):
        check = laminar_check(sink_disk_surface)
        assert check.sink_disks == (0,)
        assert not check.laminar

    def test_no_sink_fixture_is_laminar(self, no_sink_surface):
        assert laminar_check(no_sink_surface).laminar

    def test_is_laminar_splitting(self, sink_disk_surface, no_sink_surface):
        assert is_laminar_splitting(no_sink_surface)
        assert not is_laminar_splitting(sink_disk_surface)

    def test_doubled_disk_has_one_bubble(self, doubled_disk_surface):
        assert len(trivial_bubbles(doubled_disk_surface)) == 1
        assert not laminar_check(doubled_disk_surface).laminar

    def test_collapsed_bubble_is_gone(self, doubled_disk_surface):
        bubble = trivial_bubbles(doubled_disk_surface)[0]
        collapsed = collapse_bubble(doubled_disk_surface, bubble)
        assert len(collapsed.polygons) == 2
        assert trivial_bubbles(collapsed) == []

    def test_unfiltered_surface_is_refused(self, torus_surface):
        with pytest.raises(ProvenanceError):
            laminar_check(torus_surface)

    def test_report_needs_embedding(self, sink_disk_surface):
        with pytest.raises(MissingEmbeddingError):
            incompressible_reebless_report(sink_disk_surface)


class TestNormalConstruction:

    def test_all_triangles_gives_vertex_spheres(self, doubled_tetrahedron):
        surface = from_disk_types(doubled_tetrahedron, ALL_TRIANGLES)
        assert len(surface.polygons) == 8
        assert surface.branch_edges() == []
        assert carries_sphere_or_torus(surface)

    def test_carried_vertex_spheres_are_the_links(self, doubled_tetrahedron):
        surface = from_disk_types(doubled_tetrahedron, ALL_TRIANGLES)
        carried = carried_closed_vertex_surfaces(surface)
        assert len(carried) == 4
        assert all(c.is_sphere for c in carried)

    def test_carried_vertex_surfaces_need_embedding(self, sink_disk_surface):
        with pytest.raises(MissingEmbeddingError):
            carried_closed_vertex_surfaces(sink_disk_surface)

    def test_blocks_and_horizontal_boundary(self, doubled_tetrahedron):
        surface = from_disk_types(doubled_tetrahedron, ALL_TRIANGLES)
        blocks = complement_blocks(surface, doubled_tetrahedron)
        pieces = horizontal_boundary(surface)
        assert len(blocks) == 5
        assert len(pieces) == 8
        assert all(piece.is_sphere for piece in pieces)
        chi_surface = surface.vertex_count - len(surface.edges) + len(surface.polygons)
        total = sum(b.euler_characteristic for b in blocks) + chi_surface - sum(p.euler_characteristic for p in pieces)
        assert total == 0

    def test_report_flags_horizontal_spheres(self, doubled_tetrahedron):
        surface = from_disk_types(doubled_tetrahedron, ALL_TRIANGLES)
        report = incompressible_reebless_report(surface, doubled_tetrahedron)
        assert report.status("horizontal boundary has no sphere") == "FAIL"
        assert report.status("horizontal boundary incompressible") == "UNCHECKED"
        assert report.status("no disk of contact") == "PASS"

    def test_inadmissible_selection(self, doubled_tetrahedron):
        with pytest.raises(BranchedSurfaceError):
            from_disk_types(doubled_tetrahedron, DiskSelection.of([[4, 5], [0]]))

    def test_candidates_are_embedded_and_stable(self, doubled_tetrahedron):
        first = candidates(doubled_tetrahedron, limit=8)
        second = candidates(doubled_tetrahedron, limit=8)
        assert first == second
        assert all(c.embedding is not None for c in first)

    @pytest.mark.parametrize("selection", [ALL_TRIANGLES, MIXED_QUADS])
    def test_carried_weights_are_the_matching_solutions(self, doubled_tetrahedron, selection):
        surface = from_disk_types(doubled_tetrahedron, selection)
        system = branch_system(surface, closed=True)
        carried = [
            to_normal_vector(surface, w).coords
            for w in box_solutions(system.rows, system.rhs, [2] * system.variables)
        ]
        assert len(carried) == len(set(carried))
        assert set(carried) == _matching_solutions_on(doubled_tetrahedron, selection, 2)

    def test_candidates_need_closed_triangulation(self, ball):
        with pytest.raises(PreconditionError, match="closed"):
            candidates(ball)


class TestSubBranchedSurfaces:

    def test_carried_support_of_vertex_links(self, doubled_tetrahedron):
        surface = from_disk_types(doubled_tetrahedron, ALL_TRIANGLES)
        supports = sorted(sorted(carried_support(surface, c)) for c in carried_closed_vertex_surfaces(surface))
        assert supports == [[(0, v), (1, v)] for v in range(4)]

    def test_dropping_one_side_of_a_link_drops_both(self, doubled_tetrahedron):
        assert drop_disk_types(doubled_tetrahedron, ALL_TRIANGLES, [(0, 0)]) == DiskSelection.of([[1, 2, 3], [1, 2, 3]])

    def test_matching_quads_survive(self, doubled_tetrahedron):
        selection = DiskSelection.of([[0, 1, 2, 3, 4], [0, 1, 2, 3, 4]])
        reduced = drop_disk_types(doubled_tetrahedron, selection, [(0, 0), (1, 0)])
        assert reduced == DiskSelection.of([[1, 2, 3, 4], [1, 2, 3, 4]])
        assert from_disk_types(doubled_tetrahedron, reduced).branch_edges()

    def test_unmatched_quads_fall_with_the_link(self, doubled_tetrahedron):
        selection = DiskSelection.of([[0, 1, 2, 3, 4], [0, 1, 2, 3, 5]])
        reduced = drop_disk_types(doubled_tetrahedron, selection, [(0, 0), (1, 0)])
        assert reduced == DiskSelection.of([[1, 2, 3], [1, 2, 3]])

    def test_dropping_everything(self, doubled_tetrahedron):
        dropped = [(t, d) for t in range(2) for d in range(4)]
        assert drop_disk_types(doubled_tetrahedron, ALL_TRIANGLES, dropped).size() == 0


class TestSplit:

    def test_identity_split_keeps_cells(self, sink_disk_surface):
        result = split(sink_disk_surface, empty_complex(sink_disk_surface))
        assert result.polygons == sink_disk_surface.polygons
        assert result.edges == sink_disk_surface.edges
        assert result.origin == "split"

    def test_complex_from_disk_of_contact(self, sink_disk_surface):
        contact = disks_of_contact(sink_disk_surface)[0]
        complex_ = complex_from_weights(sink_disk_surface, contact.weights, contact.components)
        assert complex_.counts == (1, 0, 0)
        assert complex_.pins == (((0, 0, 0), 0),)
        assert is_valid(sink_disk_surface, complex_)

    def test_weights_must_satisfy_branch_equation(self, sink_disk_surface):
        with pytest.raises(InvalidComplexError):
            complex_from_weights(sink_disk_surface, (2, 0, 0), (0,))

    def test_split_result_records_parents(self, sink_disk_surface):
        contact = disks_of_contact(sink_disk_surface)[0]
        complex_ = complex_from_weights(sink_disk_surface, contact.weights, contact.components)
        result = split(sink_disk_surface, complex_)
        assert result.origin == "split"
        assert result.filter_passed
        assert result.embedding is None
        assert len(result.parents) == len(result.polygons)
        assert all(-1 <= parent < len(sink_disk_surface.polygons) for parent in result.parents)
