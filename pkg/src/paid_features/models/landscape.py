"""Optimal-loss landscape over a cost grid."""

from pydantic import BaseModel, Field

from .types import Vector


class LossLandscape(BaseModel):
    """Per-cost optimal losses and predictors on the grid {0, 1/M, ..., 1}.

    ``optimal_loss`` is the grid minimum; the true infimum over [0, 1] lies within
    ``slack = lambda / M`` below it.
    """

    instance_name: str
    instance_fingerprint: str
    grid_size: int = Field(ge=2, description="M; the grid has M + 1 points")
    costs: Vector
    losses: Vector
    predictors: list[Vector]
    interior: list[bool] = Field(
        default_factory=list, description="Whether nu*(c) is the unconstrained minimizer"
    )
    optimal_loss: float
    optimal_cost: float
    slack: float = Field(ge=0.0)

    @property
    def lower_bound(self) -> float:
        return self.optimal_loss - self.slack
