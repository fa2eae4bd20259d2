"""Contains the empirical contraction rate of the mean squared error."""

from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np

from tesp.errors import InsufficientDataError
from tesp.solver import RunTrace

LOGGER = logging.getLogger(__name__)

MIN_POINTS = 10
# Mean squared errors below this fraction of the initial one count as converged.
FLOOR_RTOL = 1e-24


def mean_squared_errors(traces: Sequence[RunTrace]) -> np.ndarray:
    """Mean over trials of ||X^t - X*||^2_F(M,N), for t up to the shortest trace."""
    histories = []
    for trace in traces:
        errors = trace.err_history()
        if errors is None:
            raise InsufficientDataError(f"Trace of {trace.method} carries no errors.")
        histories.append(errors)
    if not histories:
        raise InsufficientDataError("At least one trace is required.")
    length = min(len(errors) for errors in histories)
    stacked = np.array([errors[:length] for errors in histories], dtype=np.float64)
    return (stacked**2).mean(axis=0)


def empirical_rate(traces: Sequence[RunTrace]) -> float:
    """exp of the least-squares slope of log E||X^t - X*||^2 against t.

    Only the window before the mean error hits the floor is fitted. Runs that reach
    the floor within fewer than MIN_POINTS steps report a rate of 0.

    Raises:
        InsufficientDataError: If fewer than MIN_POINTS usable points remain.
    """
    mse = mean_squared_errors(traces)
    initial = float(mse[0])
    if initial == 0.0:
        return 0.0
    floor = FLOOR_RTOL * initial
    below = np.flatnonzero(mse <= floor)
    if below.size and int(below[0]) < MIN_POINTS:
        return 0.0
    window = mse[: int(below[0])] if below.size else mse
    if window.size < MIN_POINTS:
        raise InsufficientDataError(
            f"Need {MIN_POINTS} points above the error floor, got {window.size}."
        )
    steps = np.arange(window.size, dtype=np.float64)
    slope = np.polyfit(steps, np.log(window), 1)[0]
    LOGGER.debug("Fitted log-MSE slope %.6e over %d points.", slope, window.size)
    return math.exp(slope)
