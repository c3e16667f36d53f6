"""
Logging configuration shared by the CLI and the FastAPI application.
"""

import logging
from typing import Optional

from .config import settings


def setup_logging(level: Optional[str] = None) -> None:
    """Configure the root logger once from settings.log_level and settings.log_format."""
    logging.basicConfig(
        level=getattr(logging, (level or settings.log_level).upper(), logging.INFO),
        format=settings.log_format,
        force=True,
    )


__all__ = ["setup_logging"]
