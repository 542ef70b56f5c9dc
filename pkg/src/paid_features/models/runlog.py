"""Episode run-log models."""

from typing import Optional

from pydantic import BaseModel, Field

from .policy import PolicyConfig
from .types import Vector


class RoundRecord(BaseModel):
    """One interaction round."""

    t: int = Field(ge=1)
    k: int = Field(ge=0, description="Grid arm index; the cost is k / K")
    cost: float
    nu: Vector
    squared_error: float = Field(description="(x_hat^T nu - y)^2")
    loss_realized: float = Field(description="squared_error + lambda * cost")
    loss_expected: float = Field(description="l(c_t, nu_t) from the oracle")
    regret_cum: float = Field(description="sum_{s<=t} (l(c_s, nu_s) - l*)")
    objectives: Optional[Vector] = Field(
        default=None, description="Per-arm values the decision minimized, when recorded"
    )


class RunSummary(BaseModel):
    """Final statistics of an episode."""

    rounds: int = 0
    regret: float = 0.0
    regret_per_round: float = 0.0
    payment_regret: float = Field(default=0.0, description="sum_t (l*(c_t) - l*)")
    prediction_regret: float = Field(default=0.0, description="sum_t (l(c_t, nu_t) - l*(c_t))")
    mean_loss_realized: float = 0.0
    mean_loss_expected: float = 0.0
    optimal_loss: float = 0.0
    slack: float = Field(default=0.0, description="lambda / M of the scoring landscape")
    completed: bool = True
    error: Optional[str] = None


class RunLog(BaseModel):
    """Record of a single episode."""

    instance_name: str
    instance_fingerprint: str
    config: PolicyConfig
    seed: int
    horizon: int = Field(ge=0)
    rounds: list[RoundRecord] = Field(default_factory=list)
    summary: RunSummary = Field(default_factory=RunSummary)
