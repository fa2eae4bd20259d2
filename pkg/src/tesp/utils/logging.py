"""Contains logging related utility functions."""

from __future__ import annotations

import logging
import sys
from pathlib import Path


def configure(log_level: int, log_path: Path | None = None, prefix: str | None = "tesp") -> None:
    """Configure the package logger.

    Args:
        log_level: The desired verbosity level.
        log_path: Optional file that receives a copy of the log.
        prefix: The logger to configure.
    """
    logger = logging.getLogger(prefix)

    # Reset logger to initial state (e.g. after a previous CLI invocation in-process).
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    for log_filter in list(logger.filters):
        logger.removeFilter(log_filter)

    logger.setLevel(log_level)
    formatter = logging.Formatter("%(asctime)s | %(levelname)s | %(name)s | %(message)s")

    stdout_handler = logging.StreamHandler(sys.stdout)
    stdout_handler.setFormatter(formatter)
    logger.addHandler(stdout_handler)

    if log_path is not None:
        file_handler = logging.FileHandler(log_path, mode="w")
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
