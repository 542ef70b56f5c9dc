"""Exact loss oracle."""

from .checks import instance_checks, perturbation_checks
from .landscape import cost_regret, lipschitz_excess, loss_landscape
from .losses import (
    OptimalPredictors,
    check_max_loss_bound,
    expected_loss,
    expected_loss_batch,
    max_loss_bound,
    observed_covariance,
    optimal_loss_at,
    optimal_predictor,
    optimal_predictors,
    uniform_ball,
)

__all__ = [
    "observed_covariance",
    "expected_loss",
    "expected_loss_batch",
    "optimal_predictor",
    "optimal_predictors",
    "OptimalPredictors",
    "optimal_loss_at",
    "loss_landscape",
    "lipschitz_excess",
    "instance_checks",
    "perturbation_checks",
    "cost_regret",
    "max_loss_bound",
    "check_max_loss_bound",
    "uniform_ball",
]
