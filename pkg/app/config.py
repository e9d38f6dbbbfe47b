"""Application configuration."""

from functools import lru_cache

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings from environment variables."""

    # Numerical tolerances
    tn_tolerance: float = 1e-10
    uniform_rtol: float = 1e-12
    pivot_floor: float = 1e-300
    rounding_floor_factor: float = 100.0

    # Experiment defaults
    probes_per_interval: int = 10
    default_seed: int = 42
    histogram_bins: int = 30
    eval_grid: int = 1001

    # App settings
    app_name: str = "splinelab"
    debug: bool = False
    log_level: str = "INFO"
    host: str = "127.0.0.1"
    port: int = 8000

    class Config:
        env_prefix = "SPLINELAB_"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
