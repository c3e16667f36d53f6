"""
Laminarity checks on branched surfaces.

is_laminar_splitting only looks for sink disks and trivial bubbles, which
is all that is needed for splittings of a candidate that already passed
the sphere and torus filter. The tiered report covers the remaining
conditions as far as they are decidable here.
"""

import logging
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from services.tri import Triangulation
from .blocks import MONOGON_CANDIDATE, TrivialBubble, complement_blocks, horizontal_boundary, trivial_bubbles
from .model import ORIGIN_SPLIT, BranchedSurface, MissingEmbeddingError, ProvenanceError
from .queries import carried_closed_vertex_surfaces, disks_of_contact, sink_disks

logger = logging.getLogger(__name__)

PASS = "PASS"
FAIL = "FAIL"
UNCHECKED = "UNCHECKED"


class LaminarCheck(BaseModel):
    """Transcript of a laminar-splitting check."""

    model_config = ConfigDict(frozen=True)

    sink_disks: Tuple[int, ...]
    bubbles: Tuple[TrivialBubble, ...]
    origin: str
    filter_passed: bool

    @property
    def laminar(self) -> bool:
        return not self.sink_disks and not self.bubbles


class ConditionStatus(BaseModel):
    model_config = ConfigDict(frozen=True)

    condition: str
    status: str
    detail: str = ""


class IncompressibleReeblessReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    conditions: Tuple[ConditionStatus, ...]

    def status(self, condition: str) -> Optional[str]:
        return next((c.status for c in self.conditions if c.condition == condition), None)

    @property
    def failed(self) -> List[str]:
        return [c.condition for c in self.conditions if c.status == FAIL]


def laminar_check(surface: BranchedSurface) -> LaminarCheck:
    """
    Raises:
        ProvenanceError: the surface is neither a tracked splitting nor a
            filtered candidate
    """
    if surface.origin != ORIGIN_SPLIT and not surface.filter_passed:
        raise ProvenanceError(
            "laminar-splitting check needs a splitting of a candidate that passed the sphere and torus filter"
        )
    check = LaminarCheck(
        sink_disks=tuple(sink_disks(surface)),
        bubbles=tuple(trivial_bubbles(surface)),
        origin=surface.origin,
        filter_passed=surface.filter_passed,
    )
    logger.debug(f"Laminar check: {len(check.sink_disks)} sink disks, {len(check.bubbles)} bubbles")
    return check


def is_laminar_splitting(surface: BranchedSurface) -> bool:
    return laminar_check(surface).laminar


def incompressible_reebless_report(
    surface: BranchedSurface,
    triangulation: Optional[Triangulation] = None,
) -> IncompressibleReeblessReport:
    """
    Per-condition PASS / FAIL / UNCHECKED report.

    Raises:
        MissingEmbeddingError: surface has no normal realization
    """
    if surface.embedding is None:
        raise MissingEmbeddingError("incompressible-Reebless report needs a normal embedding")
    conditions: List[ConditionStatus] = []

    spheres = [piece for piece in horizontal_boundary(surface) if piece.is_sphere]
    conditions.append(ConditionStatus(
        condition="horizontal boundary has no sphere",
        status=FAIL if spheres else PASS,
        detail=f"{len(spheres)} sphere components" if spheres else "",
    ))
    conditions.append(ConditionStatus(
        condition="horizontal boundary incompressible",
        status=UNCHECKED,
        detail="incompressibility of the horizontal boundary is not decided",
    ))

    blocks = complement_blocks(surface, triangulation)
    monogons = [b for b, block in enumerate(blocks) if block.kind == MONOGON_CANDIDATE]
    conditions.append(ConditionStatus(
        condition="no monogon",
        status=UNCHECKED if monogons else PASS,
        detail=f"monogon candidate blocks {monogons}" if monogons else "",
    ))

    tori = [c for c in carried_closed_vertex_surfaces(surface) if c.is_torus]
    conditions.append(ConditionStatus(
        condition="no Reeb component",
        status=UNCHECKED if tori else PASS,
        detail=f"{len(tori)} carried vertex tori; bounds solid torus UNCHECKED" if tori else "",
    ))

    contacts = disks_of_contact(surface)
    conditions.append(ConditionStatus(
        condition="no disk of contact",
        status=FAIL if contacts else PASS,
        detail=f"{len(contacts)} minimal disks of contact" if contacts else "",
    ))
    report = IncompressibleReeblessReport(conditions=tuple(conditions))
    logger.info(f"Incompressible-Reebless report: failed {report.failed}")
    return report
