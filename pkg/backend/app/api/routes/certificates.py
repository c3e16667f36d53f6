"""
Certificate replay endpoint.
"""

import logging

from fastapi import APIRouter

from api.dependencies import bad_request, load_triangulation
from models.requests import VerifyCertificateRequest
from models.responses import CertificateCheckResponse
from services.engine import CertificateError, certificate_from_json, verify_certificate

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/certificates", tags=["Certificates"])


@router.post(
    "/verify",
    response_model=CertificateCheckResponse,
    summary="Replay a laminar certificate",
)
def verify(request: VerifyCertificateRequest):
    triangulation = load_triangulation(request.gluing_table)
    try:
        certificate = certificate_from_json(request.certificate)
    except CertificateError as e:
        raise bad_request(e)
    check = verify_certificate(triangulation, certificate)
    message = "certificate valid" if check.valid else f"certificate rejected at {check.failed_step!r}"
    return CertificateCheckResponse(
        success=True, message=message, valid=check.valid, failed_step=check.failed_step, detail=check.detail
    )
