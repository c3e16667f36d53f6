"""
Configuration module for the laminar detection service.

Handles environment variables, algorithm budgets, and configuration
for the CLI, the FastAPI surface and the tandem search engine.
"""

import os
from typing import Optional
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables.

    Uses pydantic_settings for validation and type conversion.
    Settings can be overridden via environment variables with LAMINAR_ prefix.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="LAMINAR_",
        case_sensitive=False,
        extra="ignore",
    )

    # Application settings
    app_name: str = Field(default="Laminar", description="Application name")
    app_version: str = Field(default="1.0.0", description="Application version")
    debug: bool = Field(default=False, description="Debug mode")
    environment: str = Field(default="development", description="Environment (development/production/test)")

    # API settings
    api_host: str = Field(default="0.0.0.0", description="API host")
    api_port: int = Field(default=8000, description="API port")
    api_reload: bool = Field(default=True, description="API auto-reload in development")
    max_request_size: int = Field(default=1048576, description="Max gluing table size in bytes (1MB)")

    # Logging settings
    log_level: str = Field(default="INFO", description="Logging level")
    log_format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Logging format"
    )

    # Search budgets
    default_budget: int = Field(
        default=3, ge=1, description="Tandem budget: largest laminar-splitting complex in cells, one radius stage per cell"
    )
    doc_rounds: int = Field(default=2, ge=0, description="Disk-of-contact elimination rounds")
    box_cap: int = Field(default=6, ge=1, description="Coordinate cap for relative systems without a finite LP bound")
    max_complexes_per_stage: int = Field(default=20000, ge=1, description="Splitting complexes examined per stage")
    max_profiles_per_stage: int = Field(default=200000, ge=1, description="Stack-count profiles scanned per stage")
    max_sub_surfaces: int = Field(default=64, ge=1, description="Sub-branched surfaces examined per candidate")
    max_candidates: int = Field(default=64, ge=1, description="Candidates kept after branching on splitting annuli")
    max_annulus_branches: int = Field(default=8, ge=0, description="Splitting annuli followed per candidate")
    workers: int = Field(default=1, ge=1, description="Worker threads for candidate processing")

    # Versioned encodings
    report_schema_version: str = Field(default="1.0", description="JSON report schema version")
    complex_encoding_version: str = Field(default="sc1", description="Splitting complex text encoding version")
    certificate_version: str = Field(default="cert1", description="Certificate file version")


class DevelopmentSettings(Settings):
    """Development environment specific settings."""
    debug: bool = True
    api_reload: bool = True
    log_level: str = "DEBUG"
    environment: str = "development"


class ProductionSettings(Settings):
    """Production environment specific settings."""
    debug: bool = False
    api_reload: bool = False
    log_level: str = "WARNING"
    environment: str = "production"
    workers: int = 4


class TestSettings(Settings):
    """Test environment specific settings."""
    debug: bool = True
    environment: str = "test"
    log_level: str = "CRITICAL"  # Reduce test noise
    max_complexes_per_stage: int = 5000
    max_profiles_per_stage: int = 20000


def get_settings() -> Settings:
    """
    Get application settings based on environment.

    Returns:
        Settings: Configured settings instance based on environment
    """
    env = os.getenv("LAMINAR_ENVIRONMENT", "development").lower()

    if env == "production":
        return ProductionSettings()
    elif env == "test":
        return TestSettings()
    else:
        return DevelopmentSettings()


# Global settings instance
settings = get_settings()


def override_settings(**overrides: Optional[object]) -> Settings:
    """
    Return a copy of the global settings with non-None overrides applied.

    Used by the CLI and the HTTP routers to apply per-invocation flags
    without mutating the shared instance.
    """
    values = {key: value for key, value in overrides.items() if value is not None}
    return settings.model_copy(update=values)


def is_development() -> bool:
    """Check if running in development mode."""
    return settings.environment == "development"


def is_production() -> bool:
    """Check if running in production mode."""
    return settings.environment == "production"


def is_testing() -> bool:
    """Check if running in test mode."""
    return settings.environment == "test"


__all__ = [
    "settings",
    "get_settings",
    "override_settings",
    "is_development",
    "is_production",
    "is_testing",
    "Settings",
    "DevelopmentSettings",
    "ProductionSettings",
    "TestSettings"
]
