"""Episode execution, scoring, sweeps and rate fits."""

from .episode import run_episode
from .lower_bound import in_target, modal_late_cost, run_lower_bound
from .rates import fit_rate
from .scoring import concat_logs, expected_regret
from .sweep import sweep

__all__ = [
    "run_episode",
    "expected_regret",
    "concat_logs",
    "sweep",
    "fit_rate",
    "run_lower_bound",
    "modal_late_cost",
    "in_target",
]
