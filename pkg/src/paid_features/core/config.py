"""Configuration for paid-features simulations."""

from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


def _default_horizons() -> list[int]:
    return [2**p for p in range(10, 17)]


class SimulationSettings(BaseSettings):
    """Environment-backed defaults shared by the library and the CLI."""

    model_config = SettingsConfigDict(
        env_prefix="PAID_",
        env_file=".env",
        env_file_encoding="utf-8",
    )

    # Output
    output_dir: Path = Path("runs")

    # Oracle
    oracle_grid: int = Field(default=10_000, ge=2)

    # Sweeps
    default_seeds: int = Field(default=20, ge=1)
    default_horizons: list[int] = Field(default_factory=_default_horizons)
    workers: int = Field(default=1, ge=1)

    # Numerics
    trs_tol: float = Field(default=1e-10, gt=0.0)
    trs_max_iter: int = Field(default=200, ge=1)
    psd_tol: float = Field(default=1e-9, ge=0.0)

    # Concentration lab
    min_trials: int = Field(default=100, ge=1)

    # Logging
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"


def get_settings() -> SimulationSettings:
    """Get default settings."""
    return SimulationSettings()
