"""Logging configuration for paid-features.

Every record of the ``paid_features`` logger carries the run it belongs to. Episodes bind
their instance, policy, horizon and seed with :func:`run_context`, sweeps and lower-bound
suites bind their own fields around them, and the formatter prints the bound fields in
brackets ahead of the message.
"""

import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Optional

from .config import get_settings

LOGGER_NAME = "paid_features"

_run_fields: ContextVar[dict[str, object]] = ContextVar("paid_features_run_fields", default={})


def current_run() -> dict[str, object]:
    """Fields bound by the enclosing :func:`run_context` blocks."""
    return dict(_run_fields.get())


@contextmanager
def run_context(**fields: object) -> Iterator[None]:
    """Bind ``fields`` to every record logged inside the block.

    Nested blocks extend the outer fields; a repeated key takes the inner value.
    """
    token = _run_fields.set({**_run_fields.get(), **fields})
    try:
        yield
    finally:
        _run_fields.reset(token)


class RunContextFilter(logging.Filter):
    """Sets ``record.run`` to the bound fields and ``record.run_prefix`` to their bracketed form."""

    def filter(self, record: logging.LogRecord) -> bool:
        fields = _run_fields.get()
        run = " ".join(f"{key}={value}" for key, value in fields.items())
        record.run = run
        record.run_prefix = f"[{run}] " if run else ""
        return True


def setup_logging(
    level: Optional[str] = None, log_file: Optional[str] = None, verbose: bool = False
) -> logging.Logger:
    """Setup logging configuration.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR); defaults to ``PAID_LOG_LEVEL``
        log_file: Optional file to write logs to
        verbose: If True, include timestamps and logger names

    Returns:
        Configured logger
    """
    level = (level or get_settings().log_level).upper()
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(getattr(logging, level))

    logger.handlers = []
    logger.filters = [RunContextFilter()]

    if verbose:
        fmt = "%(asctime)s - %(name)s - %(levelname)s - %(run_prefix)s%(message)s"
    else:
        fmt = "%(levelname)s: %(run_prefix)s%(message)s"

    formatter = logging.Formatter(fmt)

    # stdout carries command results, so diagnostics go to stderr
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(getattr(logging, level))
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


_logger: Optional[logging.Logger] = None


def get_logger() -> logging.Logger:
    """Get the global logger instance."""
    global _logger
    if _logger is None:
        _logger = setup_logging()
    return _logger


def set_logger(logger: logging.Logger) -> None:
    """Set the global logger instance."""
    global _logger
    _logger = logger
