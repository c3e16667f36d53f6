"""
Triangulation endpoints: validation and vertex normal surfaces.
"""

import logging

from fastapi import APIRouter, HTTPException

from api.dependencies import INPUT_ERRORS, bad_request, internal_error, load_triangulation
from models.requests import TriangulationRequest
from models.responses import ValidationResponse, VertexSurfacesResponse
from services.normal import vertex_solution_records
from services.tri import validate

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/triangulations", tags=["Triangulations"])


@router.post(
    "/validate",
    response_model=ValidationResponse,
    summary="Validate a gluing table",
)
def validate_triangulation(request: TriangulationRequest):
    """
    Report closedness, orientability and manifoldness.

    Raises:
        HTTPException: 400 when the table does not parse
    """
    triangulation = load_triangulation(request.gluing_table)
    report = validate(triangulation)
    return ValidationResponse(success=True, message=f"{triangulation.size} tetrahedra validated", report=report)


@router.post(
    "/vertex-surfaces",
    response_model=VertexSurfacesResponse,
    summary="Vertex normal surfaces",
)
def vertex_surfaces(request: TriangulationRequest):
    triangulation = load_triangulation(request.gluing_table)
    try:
        records = vertex_solution_records(triangulation)
    except INPUT_ERRORS as e:
        raise bad_request(e)
    except HTTPException:
        raise
    except Exception as e:
        raise internal_error(e)
    logger.info(f"Computed {len(records)} vertex solutions")
    return VertexSurfacesResponse(success=True, surfaces=records, count=len(records))
