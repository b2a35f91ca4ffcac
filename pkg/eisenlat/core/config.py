"""
eisenlat - Configuration
All settings loaded from environment variables (prefix EISENLAT_) or a local .env
"""

from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings

PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent


class Settings(BaseSettings):
    """Runtime settings."""

    # Shipped data (catalog, recipes, codes, fixtures); EISENLAT_DATA overrides
    data_dir: Path = Field(default=PROJECT_ROOT / "data", validation_alias="EISENLAT_DATA")

    # Automorphism / isometry search budget in seconds
    aut_budget: float = 600.0

    # Worker processes for enumeration (1 = in-process)
    threads: int = 1

    # q-series and theta precision
    theta_prec: int = 8

    # Lovasz parameter, kept as an exact fraction string
    lll_delta: str = "99/100"

    # Bound raises before decompose gives up
    decompose_retries: int = 3

    log_level: str = "INFO"

    @property
    def lll_delta_fraction(self) -> Fraction:
        """Parse the Lovasz parameter."""
        delta = Fraction(self.lll_delta)
        if not Fraction(1, 4) < delta < 1:
            raise ValueError(f"lll_delta must lie in (1/4, 1), got {self.lll_delta}")
        return delta

    def data_path(self, *parts: str) -> Path:
        """Resolve a path under the data directory."""
        return self.data_dir.joinpath(*parts)

    class Config:
        env_prefix = "EISENLAT_"
        env_file = ".env"  # Fallback for local runs
        env_file_encoding = "utf-8"
        extra = "ignore"
        populate_by_name = True


@lru_cache
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
