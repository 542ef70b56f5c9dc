"""Experiment configuration files."""

from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

from .instance import Instance
from .policy import PolicyOverrides
from .types import PolicyVariant


class ExperimentConfig(BaseModel):
    """Serialized experiment description; CLI flags override these values."""

    schema_version: Literal[1] = 1
    instance: Instance | str = Field(
        description="Inline instance, a JSON file path, or 'builtin:<name>'"
    )
    policy: PolicyVariant = "known"
    overrides: PolicyOverrides = Field(default_factory=PolicyOverrides)
    horizons: list[int] = Field(default_factory=lambda: [1024])
    seeds: list[int] = Field(default_factory=lambda: [0])
    oracle_grid: int = Field(default=10_000, ge=2)
    output_dir: Optional[Path] = None
    formats: list[Literal["csv", "json", "md"]] = Field(default_factory=lambda: ["csv", "json"])
    workers: int = Field(default=1, ge=1)

    @field_validator("horizons")
    @classmethod
    def _sorted_positive(cls, v: list[int]) -> list[int]:
        if not v or any(h < 1 for h in v):
            raise ValueError("horizons must be positive")
        if sorted(v) != v:
            raise ValueError("horizons must be sorted")
        return v

    @field_validator("seeds")
    @classmethod
    def _distinct(cls, v: list[int]) -> list[int]:
        if not v:
            raise ValueError("at least one seed is required")
        if len(set(v)) != len(v):
            raise ValueError("seeds must be distinct")
        return v
