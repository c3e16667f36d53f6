"""
Shared fixtures for the laminar detection test suite.

Run with: pytest backend/tests -v
"""

import os
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

os.environ.setdefault("LAMINAR_ENVIRONMENT", "test")
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "app"))

from services.branched import parse_branched_surface  # noqa: E402
from services.tri import from_gluing_list, parse_triangulation, perm_to_string  # noqa: E402

DOUBLED_TETRAHEDRON = (
    "2\n"
    "1:0:0123 1:1:0123 1:2:0123 1:3:0123\n"
    "0:0:0123 0:1:0123 0:2:0123 0:3:0123\n"
)

BALL = "1\nbdry bdry bdry bdry\n"

# disk D, annulus A, annulus E around one branch circle; cusp into D
SINK_DISK_SURFACE = """
polygon 0: 0+
polygon 1: 0+ 1+ 2+ 1-
polygon 2: 0+ 3+ 4+ 3-
edge 0 branch 0.0 1.0 2.0
edge 1 smooth 1.1 1.3
edge 2 free 1.2
edge 3 smooth 2.1 2.3
edge 4 free 2.2
"""

# same cells, cusp pointing away from D
NO_SINK_SURFACE = """
polygon 0: 0+
polygon 1: 0+ 1+ 2+ 1-
polygon 2: 0+ 3+ 4+ 3-
edge 0 branch 1.0 2.0 0.0
edge 1 smooth 1.1 1.3
edge 2 free 1.2
edge 3 smooth 2.1 2.3
edge 4 free 2.2
"""

# a torus whose two sheets meet along one branch circle, capped by D
TORUS_SURFACE = """
polygon 0: 0+ 1+ 0- 1-
polygon 1: 0+
edge 0 branch 0.0~ 0.2~ 1.0
edge 1 smooth 0.1 0.3
"""

# annulus A joining two branch circles, each with its own disk and cusp annulus
TWO_COMPONENT_SURFACE = """
polygon 0: 0+ 1+ 2- 1-
polygon 1: 0+
polygon 2: 2+
polygon 3: 0+ 3+ 4+ 3-
polygon 4: 2+ 5+ 6+ 5-
edge 0 branch 0.0 1.0 3.0
edge 1 smooth 0.1 0.3
edge 2 branch 0.2 2.0 4.0
edge 3 smooth 3.1 3.3
edge 4 free 3.2
edge 5 smooth 4.1 4.3
edge 6 free 4.2
"""

DETACHED_TORUS = """
polygon 5: 7+ 8+ 7- 8-
edge 7 smooth 5.0 5.2
edge 8 smooth 5.1 5.3
"""

# two disks over an annulus with free boundary: one trivial bubble
DOUBLED_DISK_SURFACE = """
polygon 0: 0+ 1+ 2+ 1-
polygon 1: 0+
polygon 2: 0+
edge 0 branch 0.0 1.0 2.0
edge 1 smooth 0.1 0.3
edge 2 free 0.2
"""

# every splitting complex of this surface pins p(B) to the free boundary
FREE_BOUNDARY_SURFACE = """
polygon 0: 0+ 1+
polygon 1: 0+
polygon 2: 0+
edge 0 branch 0.0 1.0 2.0
edge 1 free 0.1
"""


def _with_torus(text: str) -> str:
    polygons = [line for line in text.strip().splitlines() if line.startswith("polygon")]
    edges = [line for line in text.strip().splitlines() if line.startswith("edge")]
    extra = DETACHED_TORUS.strip().splitlines()
    return "\n".join(polygons + [extra[0]] + edges + extra[1:]) + "\n"



@st.composite
def closed_two_tetrahedra(draw):
    """Two tetrahedra with every face glued, gluings drawn at random."""
    faces = [(t, f) for t in range(2) for f in range(4)]
    order = draw(st.permutations(faces))
    entries = []
    for i in range(0, 8, 2):
        (t, f), (u, g) = order[i], order[i + 1]
        sources = [v for v in range(4) if v != f]
        targets = draw(st.permutations([v for v in range(4) if v != g]))
        perm = [0] * 4
        perm[f] = g
        for s, target in zip(sources, targets):
            perm[s] = target
        entries.append((t, f, u, g, perm_to_string(tuple(perm))))
    return from_gluing_list(2, entries)


@pytest.fixture
def doubled_tetrahedron():
    return parse_triangulation(DOUBLED_TETRAHEDRON)


@pytest.fixture
def ball():
    return parse_triangulation(BALL)


@pytest.fixture
def sink_disk_surface():
    return parse_branched_surface(SINK_DISK_SURFACE).with_flags(filter_passed=True)


@pytest.fixture
def no_sink_surface():
    return parse_branched_surface(NO_SINK_SURFACE).with_flags(filter_passed=True)


@pytest.fixture
def torus_surface():
    return parse_branched_surface(TORUS_SURFACE)


@pytest.fixture
def two_component_surface():
    return parse_branched_surface(TWO_COMPONENT_SURFACE).with_flags(filter_passed=True)


@pytest.fixture
def two_component_with_torus():
    return parse_branched_surface(_with_torus(TWO_COMPONENT_SURFACE))


@pytest.fixture
def doubled_disk_surface():
    return parse_branched_surface(DOUBLED_DISK_SURFACE).with_flags(filter_passed=True)


@pytest.fixture
def free_boundary_surface():
    return parse_branched_surface(FREE_BOUNDARY_SURFACE).with_flags(filter_passed=True)


@pytest.fixture
def write_file(tmp_path):
    def write(name: str, content: str) -> Path:
        path = tmp_path / name
        path.write_text(content, encoding="utf-8")
        return path

    return write
