"""
Budgeted laminar-detection pipeline.

validate -> zero-efficiency evidence -> candidates -> sub-branched surfaces
free of carried spheres and tori -> disk-of-contact elimination ->
splitting-annulus branching -> tandem (laminar-splitting search alternating
with the radius search) -> verdict.
"""

import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from core.config import Settings, settings as default_settings
from services.branched import (
    BranchedSurface,
    CarriedSurface,
    ConditionStatus,
    DiskSelection,
    UnboundedSystemError,
    candidates,
    canonical_selection,
    carried_support,
    closed_surface_evidence,
    disks_of_contact,
    drop_disk_types,
    format_selection,
    from_disk_types,
    incompressible_reebless_report,
    splitting_annuli,
    vertical_components,
)
from services.branched.split import complex_from_weights, split
from services.normal import normal_tori, zero_efficiency_report
from services.splitting import EXHAUSTED, Lamalg2Search, SplittingComplex, is_valid
from services.tri import Triangulation, validate
from utils.helpers import format_vector
from .certificates import Certificate, verify_certificate
from .errors import EnginePreconditionError, InvariantViolationError
from .lamalg1 import Lamalg1Search

logger = logging.getLogger(__name__)

LAMINAR_CERTIFIED = "LaminarCertified"
NO_CANDIDATE_CARRIES = "NoNormalCandidateCarries"
INCONCLUSIVE = "Inconclusive"

STATUS_FOUND = "Found"
STATUS_EXHAUSTED = "Exhausted"
STATUS_BUDGET = "BudgetReached"
STATUS_SPHERE = "DiscardedSphere"
STATUS_TORUS = "DiscardedTorus"
STATUS_CLOSED = "CarriedClosedSurface"
STATUS_ELIMINATION_CAPPED = "EliminationCapped"
STATUS_SUB_SURFACES_CAPPED = "SubSurfacesCapped"

CAVEAT_TORUS = "torus-carrying candidate discarded"
CAVEAT_INCOMPRESSIBILITY = "incompressibility UNCHECKED"
CAVEAT_ONE_EFFICIENT = "one-efficiency asserted by user"
CAVEAT_NOT_ONE_EFFICIENT = "one-efficiency not established; evidence-only report"
CAVEAT_SEIFERT = "small Seifert and toroidal branches not classified"
CAVEAT_SUB_SURFACES = "sub-branched surface search capped"


class CandidateRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    candidate_id: str
    selection: str
    status: str
    evidence: Tuple[str, ...] = ()
    eliminations: int = 0
    lamalg1_stages: int = 0
    lamalg2_stages: int = 0
    exhausted_at: Optional[int] = None
    report: Tuple[ConditionStatus, ...] = ()


class Verdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    schema_version: str
    outcome: str
    encoding: str = "splitting-complex"
    per_candidate: Tuple[CandidateRecord, ...]
    caveats: Tuple[str, ...]
    certificate: Optional[Certificate] = None
    zero_efficient_evidence: bool = True
    exceptional_spheres: int = 0
    normal_tori: int = 0


class _Variant:
    def __init__(self, suffix: str, surface: BranchedSurface, eliminations: List[SplittingComplex]):
        self.suffix = suffix
        self.surface = surface
        self.eliminations = eliminations


class _CandidateResult:
    def __init__(self):
        self.records: List[CandidateRecord] = []
        self.caveats: List[str] = []
        self.certificates: List[Certificate] = []


class _Reduction:
    """Outcome of the walk from one candidate to its sphere- and torus-free sub-branched surfaces."""

    def __init__(self):
        self.survivors: List[BranchedSurface] = []
        self.evidence: List[str] = []
        self.root_sphere = False
        self.torus_seen = False
        self.visited = 0
        self.capped = False


def _evidence_line(carried: CarriedSurface) -> str:
    return f"{carried.classification} weights={format_vector(carried.weights)} chi={carried.euler_characteristic}"


def _evidence_lines(surface: BranchedSurface) -> Tuple[List[str], bool, bool]:
    lines, sphere, torus = [], False, False
    for carried in closed_surface_evidence(surface):
        if carried.is_sphere or carried.is_torus:
            lines.append(_evidence_line(carried))
        sphere = sphere or carried.is_sphere
        torus = torus or carried.is_torus
    return lines, sphere, torus


def _sub_branched(triangulation: Triangulation, surface: BranchedSurface, cap: int) -> _Reduction:
    """
    Pass from a candidate to sub-branched surfaces carrying no sphere or torus.

    A surface carrying one is replaced, for each carried sphere or torus,
    by the greatest closed selection avoiding the disk types of that
    surface. Selections are visited breadth first, once per automorphism
    class, and at most cap of them are built.
    """
    reduction = _Reduction()
    root = DiskSelection(types=surface.embedding.selection)
    seen = {canonical_selection(triangulation, root).types}
    queue = deque([surface])
    while queue:
        current = queue.popleft()
        reduction.visited += 1
        carried = [c for c in closed_surface_evidence(current) if c.is_sphere or c.is_torus]
        if current is surface:
            reduction.evidence = [_evidence_line(c) for c in carried]
            reduction.root_sphere = any(c.is_sphere for c in carried)
        if not carried:
            reduction.survivors.append(current)
            continue
        reduction.torus_seen = reduction.torus_seen or any(c.is_torus for c in carried)
        selection = DiskSelection(types=current.embedding.selection)
        for item in carried:
            child = drop_disk_types(triangulation, selection, carried_support(current, item))
            if not child.size():
                continue
            key = canonical_selection(triangulation, child).types
            if key in seen:
                continue
            if len(seen) >= cap:
                reduction.capped = True
                continue
            seen.add(key)
            queue.append(from_disk_types(triangulation, child))
    logger.info(
        f"Sub-branched surfaces: {reduction.visited} examined, {len(reduction.survivors)} "
        f"carry no sphere or torus"
    )
    return reduction


def _tandem(
    triangulation: Triangulation,
    selection: DiskSelection,
    candidate_id: str,
    variant: _Variant,
    report: Tuple[ConditionStatus, ...],
    config: Settings,
) -> Tuple[CandidateRecord, Optional[Certificate]]:
    """
    Alternate budget slices of the two searches until one of them settles.

    Slice k runs radius stage k and then the laminar-splitting stage with
    k cells, so the budget is the size in cells of the largest complex the
    laminar-splitting search tries.
    """
    first = Lamalg1Search(
        variant.surface, triangulation, selection, variant.eliminations,
        cap=config.max_complexes_per_stage, profile_cap=config.max_profiles_per_stage,
    )
    second = Lamalg2Search(
        variant.surface, cap=config.max_complexes_per_stage, profile_cap=config.max_profiles_per_stage
    )
    status, certificate, exhausted_at = STATUS_BUDGET, None, None

    outcome = first.step()
    if outcome.found:
        status, certificate = STATUS_FOUND, outcome.certificate
    for _ in range(config.default_budget):
        if status != STATUS_BUDGET:
            break
        radius_outcome = second.step()
        if radius_outcome.status == EXHAUSTED:
            status, exhausted_at = STATUS_EXHAUSTED, radius_outcome.n
            break
        outcome = first.step()
        if outcome.found:
            status, certificate = STATUS_FOUND, outcome.certificate

    evidence = []
    if second.last is not None and second.last.witness is not None:
        evidence.append(f"radius witness at N={second.last.n}: R={second.last.witness_radius}")
    record = CandidateRecord(
        candidate_id=candidate_id + variant.suffix,
        selection=format_selection(selection),
        status=status,
        evidence=tuple(evidence),
        eliminations=len(variant.eliminations),
        lamalg1_stages=first.n + 1,
        lamalg2_stages=second.n,
        exhausted_at=exhausted_at,
        report=report,
    )
    logger.info(f"Candidate {record.candidate_id}: {status}")
    return record, certificate


def _process_surface(
    triangulation: Triangulation,
    candidate_id: str,
    surface: BranchedSurface,
    config: Settings,
    result: _CandidateResult,
) -> None:
    """Eliminate disks of contact, branch on splitting annuli and run the tandem searches."""
    selection = DiskSelection(types=surface.embedding.selection)
    selection_text = format_selection(selection)

    def record(status: str, evidence=(), **extra) -> None:
        result.records.append(CandidateRecord(
            candidate_id=candidate_id, selection=selection_text, status=status, evidence=tuple(evidence), **extra
        ))

    if not surface.branch_edges():
        record(STATUS_CLOSED, ["closed carried surface without branch locus"])
        result.caveats.append(f"{candidate_id}: carried closed surface, {CAVEAT_INCOMPRESSIBILITY}")
        return

    surface = surface.with_flags(filter_passed=True)
    report = incompressible_reebless_report(surface, triangulation).conditions

    eliminations: List[SplittingComplex] = []
    for round_index in range(config.doc_rounds + 1):
        contacts = disks_of_contact(surface, config.box_cap)
        if not contacts:
            break
        if round_index == config.doc_rounds:
            record(STATUS_ELIMINATION_CAPPED, [f"{len(contacts)} disks of contact remain"], eliminations=len(eliminations), report=report)
            result.caveats.append(f"{candidate_id}: disk-of-contact elimination cap reached")
            return
        contact = contacts[0]
        complex_ = complex_from_weights(surface, contact.weights, contact.components)
        if not is_valid(surface, complex_):
            record(STATUS_ELIMINATION_CAPPED, ["disk of contact has no valid splitting complex"], report=report)
            result.caveats.append(f"{candidate_id}: disk of contact could not be split along")
            return
        surface = split(surface, complex_)
        eliminations.append(complex_)
        evidence, sphere, torus = _evidence_lines(surface)
        if sphere or torus:
            record(STATUS_SPHERE if sphere else STATUS_TORUS, evidence, eliminations=len(eliminations), report=report)
            if torus and not sphere:
                result.caveats.append(CAVEAT_TORUS)
            return

    variants = [_Variant("", surface, eliminations)]
    components = vertical_components(surface)
    pairs = [(a, b) for a in range(len(components)) for b in range(a + 1, len(components))]
    branches = 0
    for first, second in pairs:
        if branches >= config.max_annulus_branches:
            result.caveats.append(f"{candidate_id}: splitting-annulus branches capped")
            break
        try:
            annuli = splitting_annuli(surface, first, second)
        except UnboundedSystemError:
            result.caveats.append(f"{candidate_id}: unbounded annulus system between components {first} and {second}")
            continue
        for annulus in annuli:
            if branches >= config.max_annulus_branches:
                break
            complex_ = complex_from_weights(surface, annulus.weights, annulus.components)
            if not is_valid(surface, complex_):
                continue
            variants.append(_Variant(f".a{branches}", split(surface, complex_), eliminations + [complex_]))
            branches += 1

    for variant in variants:
        if not variant.surface.branch_edges():
            result.records.append(CandidateRecord(
                candidate_id=candidate_id + variant.suffix,
                selection=selection_text,
                status=STATUS_CLOSED,
                evidence=("splitting left a closed carried surface",),
                eliminations=len(variant.eliminations),
                report=report,
            ))
            result.caveats.append(f"{candidate_id}{variant.suffix}: carried closed surface, {CAVEAT_INCOMPRESSIBILITY}")
            continue
        tandem_record, certificate = _tandem(triangulation, selection, candidate_id, variant, report, config)
        result.records.append(tandem_record)
        if certificate is not None:
            result.certificates.append(certificate)


def _process_candidate(
    triangulation: Triangulation, index: int, surface: BranchedSurface, config: Settings
) -> _CandidateResult:
    result = _CandidateResult()
    candidate_id = f"c{index}"
    reduction = _sub_branched(triangulation, surface, config.max_sub_surfaces)
    if reduction.torus_seen:
        result.caveats.append(CAVEAT_TORUS)
    if reduction.capped:
        result.caveats.append(f"{candidate_id}: {CAVEAT_SUB_SURFACES}")

    if reduction.survivors and reduction.survivors[0] is surface:
        _process_surface(triangulation, candidate_id, surface, config, result)
        return result

    if reduction.capped:
        status = STATUS_SUB_SURFACES_CAPPED
    else:
        status = STATUS_SPHERE if reduction.root_sphere else STATUS_TORUS
    evidence = list(reduction.evidence)
    if reduction.visited > 1:
        evidence.append(
            f"sub-branched surfaces examined: {reduction.visited - 1}, without sphere or torus: {len(reduction.survivors)}"
        )
    result.records.append(CandidateRecord(
        candidate_id=candidate_id,
        selection=format_selection(DiskSelection(types=surface.embedding.selection)),
        status=status,
        evidence=tuple(evidence),
    ))
    if status == STATUS_TORUS:
        logger.warning(f"Candidate {candidate_id} carries a vertex torus; passing to sub-branched surfaces")

    for k, sub in enumerate(reduction.survivors):
        _process_surface(triangulation, f"{candidate_id}.s{k}", sub, config, result)
    return result


def _aggregate(records: List[CandidateRecord], certificates: List[Certificate]) -> str:
    if certificates:
        return LAMINAR_CERTIFIED
    blocking = {STATUS_BUDGET, STATUS_CLOSED, STATUS_ELIMINATION_CAPPED, STATUS_SUB_SURFACES_CAPPED}
    if any(r.status in blocking for r in records):
        return INCONCLUSIVE
    return NO_CANDIDATE_CARRIES


def detect(
    triangulation: Triangulation,
    config: Optional[Settings] = None,
    assert_one_efficient: bool = False,
) -> Verdict:
    """
    Run the full pipeline on a closed orientable triangulation.

    Raises:
        EnginePreconditionError: input is not a closed orientable
            3-manifold triangulation, or the budget is not positive
        InvariantViolationError: an emitted certificate fails replay
    """
    config = config or default_settings
    if config.default_budget <= 0:
        raise EnginePreconditionError("budget must be positive")
    validation = validate(triangulation)
    if not (validation.closed and validation.orientable and validation.manifold):
        raise EnginePreconditionError(
            f"detection needs a closed orientable manifold triangulation "
            f"(closed={validation.closed}, orientable={validation.orientable}, manifold={validation.manifold})"
        )

    zero_efficiency = zero_efficiency_report(triangulation)
    tori = normal_tori(triangulation)
    caveats: List[str] = [CAVEAT_INCOMPRESSIBILITY, CAVEAT_ONE_EFFICIENT if assert_one_efficient else CAVEAT_NOT_ONE_EFFICIENT, CAVEAT_SEIFERT]
    if not zero_efficiency.zero_efficient_evidence:
        caveats.append(f"{zero_efficiency.exceptional} vertex normal spheres are not vertex links")

    found = candidates(triangulation, limit=config.max_candidates)
    if len(found) >= config.max_candidates:
        caveats.append(f"candidate list truncated at {config.max_candidates}")
    logger.info(f"Detecting laminarity over {len(found)} candidates")

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        results = list(pool.map(lambda item: _process_candidate(triangulation, item[0], item[1], config), enumerate(found)))

    records: List[CandidateRecord] = []
    certificates: List[Certificate] = []
    for result in results:
        records.extend(result.records)
        certificates.extend(result.certificates)
        caveats.extend(result.caveats)

    outcome = _aggregate(records, certificates)
    certificate = certificates[0] if certificates else None
    if certificate is not None:
        check = verify_certificate(triangulation, certificate)
        if not check:
            raise InvariantViolationError(f"emitted certificate fails replay at {check.failed_step!r}")

    verdict = Verdict(
        schema_version=config.report_schema_version,
        outcome=outcome,
        per_candidate=tuple(records),
        caveats=tuple(dict.fromkeys(caveats)),
        certificate=certificate,
        zero_efficient_evidence=zero_efficiency.zero_efficient_evidence,
        exceptional_spheres=zero_efficiency.exceptional,
        normal_tori=len(tori),
    )
    logger.info(f"Verdict: {outcome} ({len(records)} candidate records)")
    return verdict
