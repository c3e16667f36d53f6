"""
Detection endpoint.
"""

import logging

from fastapi import APIRouter, HTTPException
from fastapi.responses import Response

from api.dependencies import INPUT_ERRORS, bad_request, internal_error, load_triangulation
from core.config import override_settings
from models.requests import DetectRequest
from services.engine import InvariantViolationError, detect, verdict_to_json

logger = logging.getLogger(__name__)

router = APIRouter(tags=["Detection"])


@router.post(
    "/detect",
    summary="Run laminar detection",
    description="Budgeted detection pipeline; the body is the versioned JSON verdict",
)
def detect_laminar(request: DetectRequest):
    """
    Raises:
        HTTPException: 400 for invalid input or an unmet precondition,
            500 when an internal invariant is violated
    """
    triangulation = load_triangulation(request.gluing_table)
    config = override_settings(default_budget=request.budget, doc_rounds=request.doc_rounds)
    try:
        verdict = detect(triangulation, config, assert_one_efficient=request.assert_one_efficient)
    except InvariantViolationError as e:
        raise internal_error(e)
    except INPUT_ERRORS as e:
        raise bad_request(e)
    except HTTPException:
        raise
    except Exception as e:
        logger.exception("Detection failed")
        raise internal_error(e)
    return Response(content=verdict_to_json(verdict), media_type="application/json")
