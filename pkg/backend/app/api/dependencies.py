"""
Shared helpers for the API routers.

Parsing of request payloads and the mapping of library exceptions to HTTP
status codes: invalid input is 400, invariant violations are 500.
"""

import logging

from fastapi import HTTPException

from services.branched import BranchedSurfaceError
from services.engine import CertificateError, EnginePreconditionError
from services.normal import NormalSurfaceError
from services.splitting import SplittingError
from services.tri import Triangulation, TriangulationError, parse_triangulation

logger = logging.getLogger(__name__)

INPUT_ERRORS = (
    TriangulationError,
    NormalSurfaceError,
    BranchedSurfaceError,
    SplittingError,
    CertificateError,
    EnginePreconditionError,
)


def bad_request(error: Exception) -> HTTPException:
    logger.warning(f"Rejected input: {error}")
    return HTTPException(status_code=400, detail=str(error))


def internal_error(error: Exception) -> HTTPException:
    logger.error(f"Internal failure: {error}")
    return HTTPException(status_code=500, detail=str(error))


def load_triangulation(gluing_table: str) -> Triangulation:
    """
    Parse a request's gluing table.

    Raises:
        HTTPException: 400 with the parser's line and reason
    """
    try:
        return parse_triangulation(gluing_table)
    except TriangulationError as e:
        raise bad_request(e)
