"""Contains the iteration bookkeeping shared by the solver drivers."""

from __future__ import annotations

import logging
import math
import time

import torch

from tesp.algebra.tubal import half_spectrum
from tesp.errors import ShapeError
from tesp.sketch import MethodPreset, build_preset

from .factors import SpectralProblem
from .params import SolverConfig, StopStatus
from .problem import Problem
from .trace import IterationRecord, RunTrace

LOGGER = logging.getLogger(__name__)


def resolve_preset(problem: Problem, config: SolverConfig) -> MethodPreset | None:
    """The sketch sets and weights named by the configuration, if any."""
    if config.sketches is not None:
        return config.sketches
    if config.preset is not None:
        return build_preset(config.preset, problem.A, problem.B, semidefinite=config.semidefinite)
    return None


def initial_iterate(sp: SpectralProblem, problem: Problem, config: SolverConfig) -> torch.Tensor:
    if config.x0 is None:
        return sp.zeros_x()
    _, r, s, _, l = problem.dims
    if config.x0.shape != (r, s, l):
        raise ShapeError(f"x0 must be {r}x{s}x{l}, got {config.x0.shape}.")
    return half_spectrum(config.x0.data)


def starts_at_zero(config: SolverConfig) -> bool:
    return config.x0 is None or not bool(config.x0.data.any())


class TraceRecorder:
    """Appends iteration records and decides when a run stops."""

    def __init__(
        self,
        sp: SpectralProblem,
        problem: Problem,
        config: SolverConfig,
        trace: RunTrace,
        initial_residual: torch.Tensor,
    ):
        self.sp = sp
        self.config = config
        self.trace = trace
        self.baseline = math.sqrt(sp.frobenius_sq(initial_residual))
        self.x_star_hat = None if problem.X_star is None else half_spectrum(problem.X_star.data)
        self.started = time.perf_counter()

    def rrn(self, residual: torch.Tensor) -> float:
        if self.baseline == 0.0:
            return 0.0
        return math.sqrt(self.sp.frobenius_sq(residual)) / self.baseline

    def error(self, x_hat: torch.Tensor) -> float | None:
        if self.x_star_hat is None:
            return None
        return self.sp.error_fmn(x_hat, self.x_star_hat)

    def observe(
        self,
        iteration: int,
        x_hat: torch.Tensor,
        residual: torch.Tensor,
        chosen: tuple[int, int] | None = None,
        chosen_loss: float | None = None,
        with_error: bool = True,
    ) -> StopStatus | None:
        """Record the state after `iteration` steps and return a stop status if done.

        With with_error=False the record leaves err_fmn empty.
        """
        elapsed = time.perf_counter() - self.started
        rrn = self.rrn(residual)
        err = self.error(x_hat) if with_error else None
        self.trace.records.append(
            IterationRecord(iteration, rrn, err, chosen, chosen_loss, elapsed)
        )
        if iteration > 0 and iteration % self.config.log_every == 0:
            LOGGER.debug("Iteration %d: RRN %.3e after %.2f s.", iteration, rrn, elapsed)
        if rrn < self.config.rrn_tol:
            return "converged"
        if iteration >= self.config.max_iters:
            return "iter_cap"
        if elapsed >= self.config.max_seconds:
            return "time_cap"
        return None

    def finish(self, status: StopStatus) -> RunTrace:
        self.trace.status = status
        LOGGER.info(
            "%s stopped (%s) after %d iterations, RRN %.3e, %.2f s.",
            self.trace.method,
            status,
            self.trace.num_iterations,
            self.trace.final_rrn,
            self.trace.elapsed_s,
        )
        return self.trace
