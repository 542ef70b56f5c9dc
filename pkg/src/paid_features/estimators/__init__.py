"""Loss estimators and their confidence constants."""

from .confidence import ConfidenceParams, beta, kc_loss_width
from .known import KnownCovState, kc_quadratic, kc_quadratic_batch, kc_update
from .quadratic import LossQuadratic
from .unknown import UnknownCovState, uc_quadratic, uc_update, ucb_index, ucb_indices

__all__ = [
    "beta",
    "ConfidenceParams",
    "kc_loss_width",
    "LossQuadratic",
    "KnownCovState",
    "kc_update",
    "kc_quadratic",
    "kc_quadratic_batch",
    "UnknownCovState",
    "uc_update",
    "uc_quadratic",
    "ucb_index",
    "ucb_indices",
]
