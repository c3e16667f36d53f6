"""
Branched surface package.

Cell-level data model, the normal-disk construction of candidates, branch
equations, carried-surface queries, complementary blocks and laminarity
checks. Splitting along a splitting complex lives in
services.branched.split, which depends on services.splitting.
"""

from .blocks import (
    MONOGON_CANDIDATE,
    OTHER_BLOCK,
    PRODUCT_DISK,
    ComplementBlock,
    HorizontalPiece,
    TrivialBubble,
    collapse_bubble,
    complement_blocks,
    horizontal_boundary,
    trivial_bubbles,
)
from .construction import (
    DiskSelection,
    candidate_selections,
    candidates,
    canonical_selection,
    drop_disk_types,
    format_selection,
    from_disk_types,
    parse_selection,
)
from .model import (
    BRANCH,
    FREE,
    ORIGIN_NORMAL,
    ORIGIN_SPLIT,
    ORIGIN_TEXT,
    SMOOTH,
    BranchedSurface,
    BranchedSurfaceError,
    Edge,
    MalformedBranchedSurfaceError,
    MissingEmbeddingError,
    NormalEmbedding,
    Polygon,
    ProvenanceError,
    Sector,
    SelectionError,
    SideRef,
    UnboundedSystemError,
    UnknownComponentError,
    assemble,
    sector_of,
    sectors,
)
from .queries import (
    CarriedSurface,
    RelativeSolution,
    carried_closed_vertex_surfaces,
    carried_support,
    carries_sphere_or_torus,
    closed_surface_evidence,
    disks_of_contact,
    fully_carries_positive,
    sink_disks,
    splitting_annuli,
    to_normal_vector,
)
from .report import (
    FAIL,
    PASS,
    UNCHECKED,
    ConditionStatus,
    IncompressibleReeblessReport,
    LaminarCheck,
    incompressible_reebless_report,
    is_laminar_splitting,
    laminar_check,
)
from .systems import BranchSystem, branch_system, box_solutions, component_of, vertical_components
from .text import parse_branched_surface, serialize_branched_surface

__all__ = [
    "BRANCH",
    "FAIL",
    "FREE",
    "MONOGON_CANDIDATE",
    "ORIGIN_NORMAL",
    "ORIGIN_SPLIT",
    "ORIGIN_TEXT",
    "OTHER_BLOCK",
    "PASS",
    "PRODUCT_DISK",
    "SMOOTH",
    "UNCHECKED",
    "BranchSystem",
    "BranchedSurface",
    "BranchedSurfaceError",
    "CarriedSurface",
    "ComplementBlock",
    "ConditionStatus",
    "DiskSelection",
    "Edge",
    "HorizontalPiece",
    "IncompressibleReeblessReport",
    "LaminarCheck",
    "MalformedBranchedSurfaceError",
    "MissingEmbeddingError",
    "NormalEmbedding",
    "Polygon",
    "ProvenanceError",
    "RelativeSolution",
    "Sector",
    "SelectionError",
    "SideRef",
    "TrivialBubble",
    "UnboundedSystemError",
    "UnknownComponentError",
    "assemble",
    "box_solutions",
    "branch_system",
    "candidate_selections",
    "candidates",
    "canonical_selection",
    "drop_disk_types",
    "carried_closed_vertex_surfaces",
    "carried_support",
    "carries_sphere_or_torus",
    "closed_surface_evidence",
    "collapse_bubble",
    "complement_blocks",
    "component_of",
    "disks_of_contact",
    "format_selection",
    "from_disk_types",
    "fully_carries_positive",
    "horizontal_boundary",
    "incompressible_reebless_report",
    "is_laminar_splitting",
    "laminar_check",
    "parse_branched_surface",
    "parse_selection",
    "sector_of",
    "sectors",
    "serialize_branched_surface",
    "sink_disks",
    "splitting_annuli",
    "to_normal_vector",
    "trivial_bubbles",
    "vertical_components",
]
