"""
Response models for the laminar detection API endpoints.
"""

from datetime import datetime
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from services.normal import VertexSolutionRecord
from services.tri import ValidationReport


class BaseResponse(BaseModel):
    """
    Base response model with common fields.
    """
    success: bool = Field(..., description="Whether the operation was successful")
    timestamp: datetime = Field(default_factory=datetime.now, description="Response timestamp")
    message: Optional[str] = Field(None, description="Optional message or description")


class ErrorResponse(BaseResponse):
    """
    Error body returned for rejected input and internal failures.
    """
    success: bool = Field(default=False, description="Always false for error responses")
    error_code: Optional[str] = Field(None, description="Specific error code", examples=["INVALID_INPUT"])
    path: Optional[str] = Field(None, description="API path where the error occurred")


class HealthCheckResponse(BaseResponse):
    status: str = Field(..., description="Overall status", examples=["healthy"])
    version: str
    environment: str
    encodings: Dict[str, str] = Field(default_factory=dict, description="Versioned encodings served")


class ValidationResponse(BaseResponse):
    report: ValidationReport


class VertexSurfacesResponse(BaseResponse):
    surfaces: List[VertexSolutionRecord]
    count: int


class CertificateCheckResponse(BaseResponse):
    valid: bool
    failed_step: str = ""
    detail: str = ""


__all__ = [
    "BaseResponse",
    "ErrorResponse",
    "HealthCheckResponse",
    "ValidationResponse",
    "VertexSurfacesResponse",
    "CertificateCheckResponse",
]
