"""Sweep and rate-fit models."""

from typing import Optional

from pydantic import BaseModel, Field

from .types import PolicyVariant


class RateFit(BaseModel):
    """Ordinary least squares fit of ln(regret) on ln(T)."""

    slope: float
    stderr: float
    intercept: float
    points: int = Field(ge=0)
    excluded: int = Field(default=0, ge=0, description="Nonpositive points dropped")


class EpisodeOutcome(BaseModel):
    """Final regret of one (instance, T, seed) episode, or the error that stopped it."""

    instance_name: str
    horizon: int
    seed: int
    regret: Optional[float] = None
    payment_regret: Optional[float] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.regret is not None


class SweepRow(BaseModel):
    """Aggregated regret for one horizon."""

    instance_name: str
    horizon: int
    mean: float
    stderr: float
    n_seeds: int


class SweepResult(BaseModel):
    """Regret table across the (instance, T, seed) grid with an optional fitted exponent."""

    variant: PolicyVariant
    horizons: list[int]
    seeds: list[int]
    rows: list[SweepRow] = Field(default_factory=list)
    episodes: list[EpisodeOutcome] = Field(default_factory=list)
    fit: Optional[RateFit] = None

    @property
    def failures(self) -> list[EpisodeOutcome]:
        return [e for e in self.episodes if not e.ok]

    def curve(self) -> list[tuple[int, float]]:
        """(T, mean regret) averaged over instances, sorted by T."""
        by_horizon: dict[int, list[float]] = {}
        for row in self.rows:
            by_horizon.setdefault(row.horizon, []).append(row.mean)
        return [(h, sum(v) / len(v)) for h, v in sorted(by_horizon.items())]
