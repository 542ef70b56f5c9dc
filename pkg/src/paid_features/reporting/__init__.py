"""Report writers."""

from .generator import RUNLOG_COLUMNS, SWEEP_COLUMNS, ReportGenerator, Result, generate_report

__all__ = ["ReportGenerator", "Result", "generate_report", "RUNLOG_COLUMNS", "SWEEP_COLUMNS"]
