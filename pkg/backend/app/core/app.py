"""
FastAPI application configuration and setup.

Creates the application instance with request logging and the global
exception handlers. Routers are mounted in main.py.
"""

import logging
import time
from contextlib import asynccontextmanager

from fastapi import FastAPI, HTTPException, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .config import is_development, settings
from .logging_setup import setup_logging

setup_logging()
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    logger.info(f"Starting {settings.app_name} {settings.app_version} ({settings.environment})")
    logger.info(
        f"Budgets: stages={settings.default_budget} doc_rounds={settings.doc_rounds} "
        f"complexes/stage={settings.max_complexes_per_stage} workers={settings.workers}"
    )
    yield
    logger.info(f"{settings.app_name} shut down")


def create_app() -> FastAPI:
    """
    Create and configure the FastAPI application.

    Returns:
        FastAPI: configured application instance
    """
    app = FastAPI(
        title=settings.app_name,
        version=settings.app_version,
        description="Laminar detection for triangulated closed 3-manifolds",
        debug=settings.debug,
        lifespan=lifespan,
        docs_url="/docs" if is_development() else None,
        redoc_url=None,
    )

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        start_time = time.time()
        response = await call_next(request)
        process_time = time.time() - start_time
        response.headers["X-Process-Time"] = str(process_time)
        logger.info(f"{request.method} {request.url.path} - {response.status_code} - {process_time:.3f}s")
        return response

    @app.exception_handler(HTTPException)
    async def http_exception_handler(request: Request, exc: HTTPException):
        return JSONResponse(
            status_code=exc.status_code,
            content={
                "success": False,
                "error": exc.detail,
                "error_code": "INVALID_INPUT" if exc.status_code < 500 else "INTERNAL",
                "status_code": exc.status_code,
                "path": request.url.path,
            },
        )

    @app.exception_handler(RequestValidationError)
    async def validation_exception_handler(request: Request, exc: RequestValidationError):
        logger.warning(f"Validation error on {request.url.path}: {exc.errors()}")
        return JSONResponse(
            status_code=422,
            content={
                "success": False,
                "error": "Validation error",
                "details": jsonable_encoder(exc.errors()),
                "status_code": 422,
                "path": request.url.path,
            },
        )

    @app.get("/", tags=["Root"])
    async def root():
        return {
            "name": settings.app_name,
            "version": settings.app_version,
            "environment": settings.environment,
            "report_schema_version": settings.report_schema_version,
        }

    return app


app = create_app()

__all__ = ["app", "create_app"]
