"""
Health check endpoint.
"""

import logging

from fastapi import APIRouter

from core.config import settings
from models.responses import HealthCheckResponse

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/health", tags=["Health"])


@router.get(
    "",
    response_model=HealthCheckResponse,
    summary="Basic health check",
    description="Service status and the versioned encodings it serves",
)
async def health_check():
    return HealthCheckResponse(
        success=True,
        message="Health check completed",
        status="healthy",
        version=settings.app_version,
        environment=settings.environment,
        encodings={
            "report_schema": settings.report_schema_version,
            "splitting_complex": settings.complex_encoding_version,
            "certificate": settings.certificate_version,
        },
    )
