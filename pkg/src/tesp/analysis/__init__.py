"""Contains convergence factors, the explicit oracle step and empirical rates."""

from .oracle import oracle_step
from .rate import empirical_rate, mean_squared_errors
from .special_cases import special_case_rho
from .spectrum import ConvergenceReport, expected_projector_spectrum, pr_step_factors

__all__ = [
    "ConvergenceReport",
    "empirical_rate",
    "expected_projector_spectrum",
    "mean_squared_errors",
    "oracle_step",
    "pr_step_factors",
    "special_case_rho",
]
