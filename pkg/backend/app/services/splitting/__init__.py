"""
Splitting complex package.

Cell structure and pared locus of a branched surface, splitting complexes
with their sc1 text encoding, combinatorial balls and radius, canonical
enumeration by cell count and the staged search for complexes of large
radius.
"""

from .ball import IMMEDIATE_BOUNDARY, Ball, ball, format_radius, radius, radius_at_least, truncate
from .cells import (
    CellStructure,
    PairedCircle,
    PairedLocus,
    SurfaceSymmetry,
    cell_structure,
    is_canonical,
    least_code,
    pared_locus,
    symmetries,
    transform_complex,
)
from .complex import (
    DegenerateSurfaceError,
    InvalidComplexError,
    SplittingComplex,
    SplittingError,
    Validity,
    empty_complex,
    is_valid,
    parse_complex,
    require_valid,
    serialize_complex,
)
from .enumeration import ComplexEnumerator, enumerate_complexes, monotone_matchings, profiles
from .lamalg2 import ALIVE, BUDGET_REACHED, EXHAUSTED, Lamalg2Outcome, Lamalg2Search, lamalg2

__all__ = [
    "ALIVE",
    "BUDGET_REACHED",
    "EXHAUSTED",
    "IMMEDIATE_BOUNDARY",
    "Ball",
    "CellStructure",
    "ComplexEnumerator",
    "DegenerateSurfaceError",
    "InvalidComplexError",
    "Lamalg2Outcome",
    "Lamalg2Search",
    "PairedCircle",
    "PairedLocus",
    "SplittingComplex",
    "SplittingError",
    "SurfaceSymmetry",
    "Validity",
    "ball",
    "cell_structure",
    "empty_complex",
    "enumerate_complexes",
    "format_radius",
    "is_canonical",
    "is_valid",
    "lamalg2",
    "least_code",
    "monotone_matchings",
    "pared_locus",
    "parse_complex",
    "profiles",
    "radius",
    "radius_at_least",
    "require_valid",
    "serialize_complex",
    "symmetries",
    "transform_complex",
    "truncate",
]
