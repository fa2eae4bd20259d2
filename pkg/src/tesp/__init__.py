"""Randomized sketch-and-project solvers for tensor equations under the t-product."""

from .algebra import SpectralTubal, TubalMatrix, WeightPair
from .solver import Problem, RunTrace, SolverConfig, fast_pr_solve, solve

__all__ = [
    "Problem",
    "RunTrace",
    "SolverConfig",
    "SpectralTubal",
    "TubalMatrix",
    "WeightPair",
    "fast_pr_solve",
    "solve",
]
