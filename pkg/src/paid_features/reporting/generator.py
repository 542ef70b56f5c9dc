"""Report generation in multiple formats."""

from __future__ import annotations

import csv
import io
from datetime import datetime
from pathlib import Path
from typing import Union

from jinja2 import Environment, PackageLoader, StrictUndefined

from ..models import LossLandscape, LowerBoundReport, RunLog, SweepResult, ViolationReport

Result = Union[RunLog, SweepResult, LossLandscape, ViolationReport, LowerBoundReport]

RUNLOG_COLUMNS = ["t", "k", "cost", "loss_expected", "loss_realized", "regret_cum"]
SWEEP_COLUMNS = ["instance", "T", "mean", "stderr", "n_seeds"]

_TEMPLATES: dict[type, str] = {
    RunLog: "runlog.md.j2",
    SweepResult: "sweep.md.j2",
    LossLandscape: "landscape.md.j2",
    ViolationReport: "concentration.md.j2",
    LowerBoundReport: "lower_bound.md.j2",
}


def _format_float(value: float, digits: int = 4) -> str:
    """Format float with a fixed number of significant digits."""
    return f"{value:.{digits}g}"


def _format_percent(value: float) -> str:
    return f"{value:.1%}"


def _pass_fail(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _setup_jinja_env() -> Environment:
    """Set up Jinja2 environment with custom filters."""
    env = Environment(
        loader=PackageLoader("paid_features.reporting", "templates"),
        undefined=StrictUndefined,
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters["fmt"] = _format_float
    env.filters["format_percent"] = _format_percent
    env.filters["pass_fail"] = _pass_fail
    return env


class ReportGenerator:
    """Write run logs, sweeps, landscapes and Monte-Carlo reports to disk."""

    def __init__(self, result: Result):
        self.result = result

    def to_json(self, indent: int = 2) -> str:
        """Generate JSON report."""
        if isinstance(self.result, RunLog):
            # per-round rows go to CSV; JSON keeps the summary
            return self.result.model_dump_json(indent=indent, by_alias=True, exclude={"rounds"})
        return self.result.model_dump_json(indent=indent, by_alias=True)

    def to_csv(self) -> str:
        """Generate CSV rows.

        Raises:
            TypeError: For report types without a tabular form.
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        result = self.result
        if isinstance(result, RunLog):
            writer.writerow(RUNLOG_COLUMNS)
            for r in result.rounds:
                writer.writerow(
                    [r.t, r.k, repr(r.cost), repr(r.loss_expected), repr(r.loss_realized), repr(r.regret_cum)]
                )
        elif isinstance(result, SweepResult):
            writer.writerow(SWEEP_COLUMNS)
            for row in result.rows:
                writer.writerow(
                    [row.instance_name, row.horizon, repr(row.mean), repr(row.stderr), row.n_seeds]
                )
        elif isinstance(result, LossLandscape):
            d = len(result.predictors[0]) if result.predictors else 0
            writer.writerow(["c", "loss_opt", *[f"nu_opt_{i}" for i in range(d)]])
            for c, loss, nu in zip(result.costs, result.losses, result.predictors):
                writer.writerow([repr(c), repr(loss), *[repr(v) for v in nu]])
        else:
            raise TypeError(f"{type(result).__name__} has no CSV form")
        return buffer.getvalue()

    def to_markdown(self) -> str:
        """Generate Markdown summary."""
        template = _setup_jinja_env().get_template(_TEMPLATES[type(self.result)])
        return template.render(
            result=self.result, generated_date=datetime.now().strftime("%Y-%m-%d %H:%M")
        )

    def save(self, path: str | Path, format: str = "auto") -> Path:
        """Save report to file, picking the format from the extension when ``auto``."""
        output_path = Path(path)
        if format == "auto":
            suffix = output_path.suffix
            if suffix == ".csv":
                format = "csv"
            elif suffix in (".md", ".markdown"):
                format = "markdown"
            else:
                format = "json"

        if format == "csv":
            content = self.to_csv()
        elif format in ("md", "markdown"):
            content = self.to_markdown()
        else:
            content = self.to_json()

        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(content, encoding="utf-8")
        return output_path


def generate_report(result: Result, format: str = "json") -> str:
    """Quick report generation."""
    generator = ReportGenerator(result)
    if format == "csv":
        return generator.to_csv()
    if format in ("md", "markdown"):
        return generator.to_markdown()
    return generator.to_json()
