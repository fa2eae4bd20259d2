"""Contains benchmark problems, metrics and the experiment driver."""

from .experiment import (
    ExperimentResult,
    ExperimentSpec,
    ResultRow,
    parse_method,
    run_experiment,
    trial_seeds,
    write_results,
)
from .metrics import format_psnr, psnr
from .problems import (
    DEFAULT_CHANNEL_BLUR,
    build_deblur_problem,
    expand_to_matrix_problem,
    gaussian_toeplitz,
    gen_random_equation,
    observed_image,
    synthetic_image,
    vectorize_problem,
)

__all__ = [
    "DEFAULT_CHANNEL_BLUR",
    "ExperimentResult",
    "ExperimentSpec",
    "ResultRow",
    "build_deblur_problem",
    "expand_to_matrix_problem",
    "format_psnr",
    "gaussian_toeplitz",
    "gen_random_equation",
    "observed_image",
    "parse_method",
    "psnr",
    "run_experiment",
    "synthetic_image",
    "trial_seeds",
    "vectorize_problem",
    "write_results",
]
