"""Monte-Carlo validation of the concentration bounds."""

from .checkpoints import geometric_checkpoints
from .loss import mc_loss_uniform
from .matrix import matrix_bound, mc_matrix_concentration

__all__ = ["geometric_checkpoints", "mc_matrix_concentration", "mc_loss_uniform", "matrix_bound"]
