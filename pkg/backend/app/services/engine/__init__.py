"""
Detection engine package.

Budgeted pipeline from a triangulation to a verdict: candidate filtering,
disk-of-contact elimination, splitting-annulus branching, the tandem pair
of searches, certificates and reports.
"""

from .certificates import (
    Certificate,
    CertificateCheck,
    Transcript,
    certificate_from_json,
    certificate_to_json,
    load_certificate,
    save_certificate,
    verify_certificate,
)
from .pipeline import (
    INCONCLUSIVE,
    LAMINAR_CERTIFIED,
    NO_CANDIDATE_CARRIES,
    CandidateRecord,
    Verdict,
    detect,
)
from .errors import CertificateError, EngineError, EnginePreconditionError, InvariantViolationError
from .lamalg1 import FOUND, NOT_FOUND, Lamalg1Outcome, Lamalg1Search, lamalg1_bounded
from .reports import render_text, verdict_to_json

__all__ = [
    "FOUND",
    "INCONCLUSIVE",
    "LAMINAR_CERTIFIED",
    "NOT_FOUND",
    "NO_CANDIDATE_CARRIES",
    "CandidateRecord",
    "Certificate",
    "CertificateCheck",
    "CertificateError",
    "EngineError",
    "EnginePreconditionError",
    "InvariantViolationError",
    "Lamalg1Outcome",
    "Lamalg1Search",
    "Transcript",
    "Verdict",
    "certificate_from_json",
    "certificate_to_json",
    "detect",
    "lamalg1_bounded",
    "load_certificate",
    "render_text",
    "save_certificate",
    "verdict_to_json",
    "verify_certificate",
]
