"""
Bounded search for a laminar splitting.

Stage 0 checks the identity splitting. Stage N splits along every
splitting complex with exactly N cells, in canonical order, and stops at
the first splitting without sink disks and trivial bubbles.
"""

import logging
from typing import List, Optional

from pydantic import BaseModel, ConfigDict

from services.branched import BranchedSurface, DiskSelection
from services.branched.report import laminar_check
from services.branched.split import split
from services.splitting import ComplexEnumerator, SplittingComplex, empty_complex, serialize_complex
from services.tri import Triangulation
from .certificates import Certificate, build_certificate, make_transcript
from .errors import EnginePreconditionError

logger = logging.getLogger(__name__)

FOUND = "Found"
NOT_FOUND = "NotFoundWithin"


class Lamalg1Outcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    status: str
    n: int
    certificate: Optional[Certificate] = None
    examined: int = 0
    capped: bool = False

    @property
    def found(self) -> bool:
        return self.status == FOUND


class Lamalg1Search:
    """
    Stateful stage runner over one filtered candidate.

    triangulation and selection are only needed to issue certificates;
    eliminations are the complexes that produced the surface from the
    candidate.
    """

    def __init__(
        self,
        surface: BranchedSurface,
        triangulation: Optional[Triangulation] = None,
        selection: Optional[DiskSelection] = None,
        eliminations: Optional[List[SplittingComplex]] = None,
        cap: Optional[int] = None,
        workers: int = 1,
        profile_cap: Optional[int] = None,
    ):
        if not surface.filter_passed:
            raise EnginePreconditionError("laminar-splitting search needs a candidate that passed the sphere and torus filter")
        self.surface = surface
        self.triangulation = triangulation
        self.selection = selection
        self.eliminations = list(eliminations or [])
        self.cap = cap
        self.workers = workers
        self.profile_cap = profile_cap
        self.n = -1
        self.examined = 0
        self.last: Optional[Lamalg1Outcome] = None

    @property
    def finished(self) -> bool:
        return self.last is not None and self.last.found

    def _try(self, complex_: SplittingComplex) -> Optional[Certificate]:
        result = split(self.surface, complex_)
        check = laminar_check(result)
        if not check.laminar:
            return None
        if self.triangulation is None or self.selection is None:
            # surfaces parsed from text have no candidate to name
            return Certificate(
                triangulation_digest="",
                selection="",
                complex=serialize_complex(complex_),
                transcript=make_transcript(check, result),
            )
        return build_certificate(self.triangulation, self.selection, self.eliminations, complex_, check, result)

    def step(self) -> Lamalg1Outcome:
        if self.finished:
            return self.last
        self.n += 1
        certificate = None
        examined = 0
        capped = False
        if self.n == 0:
            examined = 1
            certificate = self._try(empty_complex(self.surface))
        else:
            enumerator = ComplexEnumerator(
                self.surface, self.n, self.cap, self.workers, min_cells=self.n, profile_cap=self.profile_cap
            )
            for complex_ in enumerator:
                certificate = self._try(complex_)
                if certificate is not None:
                    break
            examined = enumerator.examined
            capped = enumerator.capped
        self.examined += examined
        status = FOUND if certificate is not None else NOT_FOUND
        self.last = Lamalg1Outcome(status=status, n=self.n, certificate=certificate, examined=examined, capped=capped)
        logger.debug(f"lamalg1 stage N={self.n}: {status}")
        if certificate is not None:
            logger.info(f"Laminar splitting found with {self.n} cells")
        return self.last


def lamalg1_bounded(
    surface: BranchedSurface,
    budget: int,
    triangulation: Optional[Triangulation] = None,
    selection: Optional[DiskSelection] = None,
    cap: Optional[int] = None,
    workers: int = 1,
) -> Lamalg1Outcome:
    """
    Look for a laminar splitting along complexes with at most budget cells.

    Stage N examines the complexes with exactly N cells, so the last stage
    run is N = budget.

    Raises:
        EnginePreconditionError: the surface did not pass the filter, or
            budget is negative
    """
    if budget < 0:
        raise EnginePreconditionError("budget must be non-negative")
    search = Lamalg1Search(surface, triangulation, selection, cap=cap, workers=workers)
    outcome = search.step()
    while not outcome.found and search.n < budget:
        outcome = search.step()
    return outcome
