"""
Configuration management for circsep
Uses Pydantic Settings for environment variable validation
"""
from typing import Optional

from pydantic_settings import BaseSettings

from circsep import __version__


class Settings(BaseSettings):
    """Library and CLI settings loaded from environment variables"""

    # Application Settings
    APP_NAME: str = "circsep"
    APP_VERSION: str = __version__

    # Numeric tolerances
    CIRCSEP_EPS: float = 1e-9          # relative, constructions only
    BOUNDARY_TOL: float = 1e-12        # scaled by bounding-box diameter
    TANGENT_PARAM_TOL: float = 1e-12   # tangent-point bisection, normalized parameter
    LINE_RADIUS_RATIO: float = 1e-9    # sagitta/half-chord below which a circle is a line, never under 16*eps

    # Hierarchy
    DK_DEGREE_LIMIT: int = 8

    # Brute-force references
    ORACLE_RESOLUTION: int = 200
    ORACLE_ROUNDS: int = 6

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FILE: Optional[str] = None

    class Config:
        env_file = ".env"
        case_sensitive = True


# Global settings instance
settings = Settings()


def get_eps() -> float:
    """Current construction tolerance (predicates are exact and ignore it)"""
    return settings.CIRCSEP_EPS


def disk_tol(radius: float, diameter: float) -> float:
    """Overlap allowed between a tangent disk of this radius and a polygon boundary"""
    return get_eps() * max(radius, diameter, 1.0)
