"""
Request models for the laminar detection API endpoints.

Pydantic models for request validation across all API endpoints.
"""

from typing import Optional

from pydantic import BaseModel, Field, field_validator

from core.config import settings


class TriangulationRequest(BaseModel):
    """
    A gluing table in the one-line-per-tetrahedron text format.
    """
    gluing_table: str = Field(
        ...,
        description="Gluing table text",
        min_length=1,
        examples=["1\nbdry bdry bdry bdry\n"],
    )

    @field_validator("gluing_table")
    @classmethod
    def validate_size(cls, v: str) -> str:
        """Reject tables over the configured request size."""
        if len(v.encode("utf-8")) > settings.max_request_size:
            raise ValueError(f"gluing table exceeds {settings.max_request_size} bytes")
        return v


class DetectRequest(TriangulationRequest):
    """
    Detection request with per-call budget overrides.
    """
    budget: Optional[int] = Field(None, ge=1, description="Tandem budget in splitting-complex stages")
    doc_rounds: Optional[int] = Field(None, ge=0, description="Disk-of-contact elimination rounds")
    assert_one_efficient: bool = Field(False, description="Accept the triangulation as one-efficient")


class VerifyCertificateRequest(TriangulationRequest):
    """
    Certificate replay request.
    """
    certificate: str = Field(..., min_length=2, description="Certificate JSON document")


__all__ = ["TriangulationRequest", "DetectRequest", "VerifyCertificateRequest"]
