"""Regret scoring of finished episodes."""

from ..core.errors import InstanceMismatchError
from ..models import LossLandscape, RunLog


def expected_regret(runlog: RunLog, landscape: LossLandscape) -> float:
    """sum_t l(c_t, nu_t) - T l*, with l* taken from ``landscape``.

    The result carries the landscape's lambda / M discretization slack.

    Raises:
        InstanceMismatchError: If the log and landscape refer to different instances.
    """
    if runlog.instance_fingerprint != landscape.instance_fingerprint:
        raise InstanceMismatchError(
            f"Run log of '{runlog.instance_name}' scored against landscape of "
            f"'{landscape.instance_name}'"
        )
    total = sum(record.loss_expected for record in runlog.rounds)
    return total - len(runlog.rounds) * landscape.optimal_loss


def concat_logs(first: RunLog, second: RunLog, landscape: LossLandscape) -> list[float]:
    """Cumulative regret of two consecutive log segments, recomputed from expected losses."""
    cumulative: list[float] = []
    running = 0.0
    for record in [*first.rounds, *second.rounds]:
        running += record.loss_expected - landscape.optimal_loss
        cumulative.append(running)
    return cumulative
