"""Contains the sketch-and-project solvers."""

from .driver import solve
from .fast import fast_pr_solve
from .params import ADAPTIVE_RULES, MethodName, SelectionRule, SolverConfig, StopStatus
from .problem import Problem, rrn
from .selection import sample_categorical, select_index
from .step import sketched_losses, tesp_step
from .trace import IterationRecord, RunTrace

__all__ = [
    "ADAPTIVE_RULES",
    "IterationRecord",
    "MethodName",
    "Problem",
    "RunTrace",
    "SelectionRule",
    "SolverConfig",
    "StopStatus",
    "fast_pr_solve",
    "rrn",
    "sample_categorical",
    "select_index",
    "sketched_losses",
    "solve",
    "tesp_step",
]
