"""
Search for splitting complexes of large radius.

Stage N enumerates every complex with at most |p(B)^(0)| r^N cells and
looks for one of radius at least N - 1. A stage with no such complex
proves that B fully carries no lamination. Stages run one at a time so
the engine can interleave them with the laminar-splitting search.
"""

import logging
from typing import Optional

from pydantic import BaseModel, ConfigDict

from services.branched.model import BranchedSurface
from .ball import format_radius, radius, radius_at_least
from .cells import cell_structure, pared_locus
from .complex import SplittingComplex, serialize_complex
from .enumeration import ComplexEnumerator

logger = logging.getLogger(__name__)

ALIVE = "Alive"
EXHAUSTED = "Exhausted"
BUDGET_REACHED = "BudgetReached"


class Lamalg2Outcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    status: str
    n: int
    witness: Optional[SplittingComplex] = None
    witness_radius: str = ""
    examined: int = 0
    capped: bool = False

    @property
    def witness_text(self) -> str:
        return serialize_complex(self.witness) if self.witness is not None else ""


class Lamalg2Search:
    """Stateful stage runner; step() runs the next N."""

    def __init__(
        self,
        surface: BranchedSurface,
        cap: Optional[int] = None,
        workers: int = 1,
        profile_cap: Optional[int] = None,
    ):
        structure = cell_structure(surface)
        self.surface = surface
        self.r = structure.max_incidence
        self.p_zero_cells = pared_locus(surface).zero_cells
        self.cap = cap
        self.workers = workers
        self.profile_cap = profile_cap
        self.n = 0
        self.examined = 0
        self.last: Optional[Lamalg2Outcome] = None

    @property
    def finished(self) -> bool:
        return self.last is not None and self.last.status != ALIVE

    def cell_bound(self, n: int) -> int:
        return self.p_zero_cells * self.r ** n

    def step(self) -> Lamalg2Outcome:
        if self.finished:
            return self.last
        self.n += 1
        enumerator = ComplexEnumerator(
            self.surface, self.cell_bound(self.n), self.cap, self.workers, profile_cap=self.profile_cap
        )
        witness, witness_radius = None, None
        for complex_ in enumerator:
            value = radius(self.surface, complex_)
            if radius_at_least(value, self.n - 1):
                witness, witness_radius = complex_, value
                break
        self.examined += enumerator.examined

        if witness is not None:
            outcome = Lamalg2Outcome(
                status=ALIVE,
                n=self.n,
                witness=witness,
                witness_radius=format_radius(witness_radius),
                examined=enumerator.examined,
            )
        elif enumerator.capped:
            previous = self.last.witness if self.last is not None else None
            outcome = Lamalg2Outcome(
                status=BUDGET_REACHED,
                n=self.n,
                witness=previous,
                witness_radius=self.last.witness_radius if self.last is not None else "",
                examined=enumerator.examined,
                capped=True,
            )
        else:
            outcome = Lamalg2Outcome(status=EXHAUSTED, n=self.n, examined=enumerator.examined)
            logger.info(f"No splitting complex of radius >= {self.n - 1}: exhausted at N={self.n}")
        logger.debug(f"lamalg2 stage N={self.n}: {outcome.status}, {enumerator.examined} pairings examined")
        self.last = outcome
        return outcome


def lamalg2(
    surface: BranchedSurface,
    budget: int,
    cap: Optional[int] = None,
    workers: int = 1,
    profile_cap: Optional[int] = None,
) -> Lamalg2Outcome:
    """
    Run stages N = 1..budget.

    Returns Exhausted(N) at the first stage without a witness, or
    BudgetReached with the last witness.

    Raises:
        ValueError: budget < 1
        DegenerateSurfaceError: empty branch locus
    """
    if budget < 1:
        raise ValueError("lamalg2 budget must be at least 1")
    search = Lamalg2Search(surface, cap, workers, profile_cap)
    outcome = search.step()
    while outcome.status == ALIVE and search.n < budget:
        outcome = search.step()
    if outcome.status == ALIVE:
        return outcome.model_copy(update={"status": BUDGET_REACHED})
    return outcome
