"""
Laminar certificates: creation, storage and replay.

A certificate names the candidate by its disk-type selection, lists the
splitting complexes used to eliminate disks of contact, the final
splitting complex, and the transcript of the laminar check on the final
splitting. Replaying rebuilds everything from the triangulation.
"""

import hashlib
import logging
from pathlib import Path
from typing import List, Tuple, Union

import orjson
from pydantic import BaseModel, ConfigDict, ValidationError

from core.config import settings
from services.branched import (
    BranchedSurface,
    BranchedSurfaceError,
    DiskSelection,
    LaminarCheck,
    carries_sphere_or_torus,
    format_selection,
    from_disk_types,
    laminar_check,
    parse_selection,
)
from services.branched.split import split
from services.splitting import SplittingComplex, SplittingError, is_valid, parse_complex, serialize_complex
from services.tri import Triangulation, serialize_triangulation
from .errors import CertificateError

logger = logging.getLogger(__name__)

ENCODING = "splitting-complex"

STEP_VERSION = "version"
STEP_SELECTION = "selection admissible"
STEP_FILTER = "filter provenance"
STEP_COMPLEX = "c valid"
STEP_TRANSCRIPT = "laminar transcript"


class Transcript(BaseModel):
    model_config = ConfigDict(frozen=True)

    sink_disks: Tuple[int, ...] = ()
    bubbles: Tuple[Tuple[int, int], ...] = ()
    origin: str
    filter_passed: bool
    polygons: int
    branch_edges: int


class Certificate(BaseModel):
    model_config = ConfigDict(frozen=True)

    version: str = settings.certificate_version
    encoding: str = ENCODING
    triangulation_digest: str
    selection: str
    eliminations: Tuple[str, ...] = ()
    complex: str
    transcript: Transcript


class CertificateCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    valid: bool
    failed_step: str = ""
    detail: str = ""

    def __bool__(self) -> bool:
        return self.valid


def triangulation_digest(triangulation: Triangulation) -> str:
    return hashlib.sha256(serialize_triangulation(triangulation).encode("utf-8")).hexdigest()


def make_transcript(check: LaminarCheck, surface: BranchedSurface) -> Transcript:
    return Transcript(
        sink_disks=check.sink_disks,
        bubbles=tuple((b.smooth_sector, b.cusp_sector) for b in check.bubbles),
        origin=check.origin,
        filter_passed=check.filter_passed,
        polygons=len(surface.polygons),
        branch_edges=len(surface.branch_edges()),
    )


def build_certificate(
    triangulation: Triangulation,
    selection: DiskSelection,
    eliminations: List[SplittingComplex],
    complex_: SplittingComplex,
    check: LaminarCheck,
    split_surface: BranchedSurface,
) -> Certificate:
    return Certificate(
        triangulation_digest=triangulation_digest(triangulation),
        selection=format_selection(selection),
        eliminations=tuple(serialize_complex(c) for c in eliminations),
        complex=serialize_complex(complex_),
        transcript=make_transcript(check, split_surface),
    )


def _fail(step: str, detail: str) -> CertificateCheck:
    logger.info(f"Certificate rejected at {step!r}: {detail}")
    return CertificateCheck(valid=False, failed_step=step, detail=detail)


def verify_certificate(triangulation: Triangulation, certificate: Certificate) -> CertificateCheck:
    """
    Replay a certificate and report the first failing step.

    Steps: "version", "selection admissible", "filter provenance",
    "elimination k valid", "c valid", "laminar transcript".
    """
    if certificate.version != settings.certificate_version:
        return _fail(STEP_VERSION, f"unsupported certificate version {certificate.version!r}")
    if certificate.encoding != ENCODING:
        return _fail(STEP_VERSION, f"unsupported complex encoding {certificate.encoding!r}")

    if certificate.triangulation_digest != triangulation_digest(triangulation):
        return _fail(STEP_SELECTION, "certificate was issued for a different triangulation")
    try:
        surface = from_disk_types(triangulation, parse_selection(certificate.selection))
    except BranchedSurfaceError as e:
        return _fail(STEP_SELECTION, str(e))

    if not surface.branch_edges() or carries_sphere_or_torus(surface):
        return _fail(STEP_FILTER, "candidate does not pass the sphere and torus filter")
    surface = surface.with_flags(filter_passed=True)

    for k, text in enumerate(certificate.eliminations):
        step = f"elimination {k} valid"
        try:
            elimination = parse_complex(text)
        except SplittingError as e:
            return _fail(step, str(e))
        verdict = is_valid(surface, elimination)
        if not verdict:
            return _fail(step, verdict.reason)
        surface = split(surface, elimination)
        if carries_sphere_or_torus(surface):
            return _fail(STEP_FILTER, f"elimination {k} produced a sphere- or torus-carrying surface")

    try:
        complex_ = parse_complex(certificate.complex)
    except SplittingError as e:
        return _fail(STEP_COMPLEX, str(e))
    verdict = is_valid(surface, complex_)
    if not verdict:
        return _fail(STEP_COMPLEX, verdict.reason)

    result = split(surface, complex_)
    check = laminar_check(result)
    replayed = make_transcript(check, result)
    if not check.laminar:
        return _fail(STEP_TRANSCRIPT, "splitting has sink disks or trivial bubbles")
    if replayed != certificate.transcript:
        return _fail(STEP_TRANSCRIPT, "replayed transcript differs from the certificate")
    return CertificateCheck(valid=True)


def certificate_to_json(certificate: Certificate) -> bytes:
    return orjson.dumps(certificate.model_dump(mode="json"), option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2)


def certificate_from_json(data: Union[bytes, str]) -> Certificate:
    """
    Raises:
        CertificateError: not JSON or not a certificate
    """
    try:
        return Certificate.model_validate(orjson.loads(data))
    except (orjson.JSONDecodeError, ValidationError) as e:
        raise CertificateError(f"malformed certificate: {e}")


def save_certificate(certificate: Certificate, path: Union[str, Path]) -> None:
    Path(path).write_bytes(certificate_to_json(certificate))
    logger.info(f"Certificate written to {path}")


def load_certificate(path: Union[str, Path]) -> Certificate:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise CertificateError(f"cannot read certificate: {e}")
    return certificate_from_json(data)
