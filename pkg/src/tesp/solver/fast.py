"""Contains the fast adaptive-probabilities solver with residual recursion.

The table of sketched residuals R_ij = P_i (A X B - C) Q_j is updated after the step
on pair (a, b) by

    R_ij <- R_ij - (P_i A M^-1 A^H P_a^H) R_ab (Q_b^H B^H N^-1 B Q_j),

so the losses never need the full residual. The residual R itself follows the same
rank-limited update through A M^-1 A^H P_a^H and Q_b^H B^H N^-1 B, which gives the RRN for
the stopping rule without forming A X B. Both are recomputed from X every
residual_refresh_period iterations and at the stop, where the drift is recorded and the
F(M, N) error is evaluated; other records leave err_fmn empty.
"""

from __future__ import annotations

import logging
import time

import torch

from tesp.algebra import TubalMatrix
from tesp.algebra.tubal import from_half
from tesp.errors import ParameterError

from .driver import method_label
from .factors import SketchFactors, SpectralProblem, build_factors, enforce_real_slices
from .loop import TraceRecorder, initial_iterate, resolve_preset, starts_at_zero
from .params import SolverConfig
from .problem import Problem
from .selection import select_index, uniform_pair
from .trace import RunTrace

LOGGER = logging.getLogger(__name__)


def _drift(recursed: torch.Tensor, direct: torch.Tensor) -> float:
    if recursed.numel() == 0:
        return 0.0
    return float((recursed - direct).abs().max())


def _refresh(
    factors: SketchFactors,
    x_hat: torch.Tensor,
    residual: torch.Tensor,
    table: torch.Tensor,
    iteration: int,
    trace: RunTrace,
) -> tuple[torch.Tensor, torch.Tensor]:
    """Recompute the residual and its table from X and record the drift of the recursion."""
    direct = factors.sp.residual(x_hat)
    direct_table = factors.sketch_all(direct)
    drift = max(_drift(table, direct_table), _drift(residual, direct))
    trace.residual_drift.append((iteration, drift))
    LOGGER.debug("Refreshed residual table at iteration %d (drift %.3e).", iteration, drift)
    return direct, direct_table


def fast_pr_solve(problem: Problem, config: SolverConfig) -> tuple[TubalMatrix, RunTrace]:
    """Adaptive-probabilities sketch-and-project with cached sketched residuals.

    Chooses the same pairs as solve() with method "ATESP-PR" and the same seed.
    """
    config.validate()
    if config.method != "ATESP-PR":
        raise ParameterError(f"The fast path implements ATESP-PR only, got {config.method}.")
    l = problem.dims[-1]
    started = time.perf_counter()
    preset = resolve_preset(problem, config)
    assert preset is not None
    sp = SpectralProblem.build(problem, preset.weights)
    factors = build_factors(sp, preset.left_set, preset.right_set)
    left_map, right_map = factors.residual_maps()
    left_gram, right_gram = factors.p @ left_map, right_map @ factors.q
    generator = torch.Generator().manual_seed(config.seed)
    base_probs = (factors.left_probs, factors.right_probs)
    x_hat = initial_iterate(sp, problem, config)

    trace = RunTrace(
        method=method_label(config, preset) + "-fast",
        theory_applicable=starts_at_zero(config),
        precompute_s=time.perf_counter() - started,
        loss_tables=[] if config.record_losses else None,
    )
    LOGGER.info(
        "Running %s on (m, r, s, n, l) = %s with seed %d.", trace.method, problem.dims, config.seed
    )
    residual = sp.residual(x_hat)
    table = factors.sketch_all(residual)
    recorder = TraceRecorder(sp, problem, config, trace, residual)
    status = recorder.observe(0, x_hat, residual)
    iteration = 0
    while status is None:
        losses = factors.block_losses(table)
        if trace.loss_tables is not None:
            trace.loss_tables.append(losses)
        chosen = select_index(losses, "PR", base_probs, config.theta, generator)
        if chosen is None:
            chosen = uniform_pair(*factors.shape, generator)
        i, j = chosen
        rows, cols = factors.left_block(i), factors.right_block(j)
        sketched = table[:, rows.start : rows.stop, cols.start : cols.stop]
        loss = sp.frobenius_sq(sketched)
        x_hat = enforce_real_slices(x_hat - factors.lift(i, j, sketched), l)
        table = table - (
            left_gram[:, :, rows.start : rows.stop]
            @ sketched
            @ right_gram[:, cols.start : cols.stop]
        )
        residual = residual - (
            left_map[:, :, rows.start : rows.stop] @ sketched @ right_map[:, cols.start : cols.stop]
        )
        iteration += 1
        refresh = iteration % config.residual_refresh_period == 0
        if refresh:
            residual, table = _refresh(factors, x_hat, residual, table, iteration, trace)
        status = recorder.observe(iteration, x_hat, residual, chosen, loss, with_error=refresh)

    if not trace.residual_drift or trace.residual_drift[-1][0] != iteration:
        residual, table = _refresh(factors, x_hat, residual, table, iteration, trace)
        trace.records[-1] = trace.records[-1]._replace(
            rrn=recorder.rrn(residual), err_fmn=recorder.error(x_hat)
        )
    return from_half(x_hat, l), recorder.finish(status)
