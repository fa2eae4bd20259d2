"""Contains the sketch-and-project drivers: TESP-stream, NTESP and the adaptive rules.

Every driver works on the half spectrum of X and consumes one seeded torch
generator, so a (problem, config) pair always reproduces the same trace.
"""

from __future__ import annotations

import logging
import time
from typing import NamedTuple, Protocol

import torch

from tesp.algebra import TubalMatrix, WeightPair
from tesp.algebra.tubal import from_half, half_spectrum
from tesp.sketch import MethodPreset, SketchOperator, gaussian_sketch, sampling_sketch

from .factors import (
    SketchFactors,
    SpectralProblem,
    build_factors,
    enforce_real_slices,
    left_factor,
    right_factor,
)
from .loop import TraceRecorder, initial_iterate, resolve_preset, starts_at_zero
from .params import ADAPTIVE_RULES, SolverConfig
from .problem import Problem
from .selection import sample_categorical, select_index, uniform_pair
from .trace import RunTrace

LOGGER = logging.getLogger(__name__)


class Move(NamedTuple):
    """Update of X's half spectrum, the pair it used and that pair's sketched loss."""

    update: torch.Tensor
    chosen: tuple[int, int] | None
    loss: float


class StepRule(Protocol):
    def __call__(self, residual: torch.Tensor, trace: RunTrace) -> Move: ...


def method_label(config: SolverConfig, preset: MethodPreset | None) -> str:
    if config.method == "TESP-stream" or preset is None:
        return f"TESP-stream[{config.stream_kind}]"
    return f"{config.method}[{preset.name}]"


class FiniteSetStep:
    """Pick a pair from the finite sets (by probability or by loss) and project."""

    def __init__(self, factors: SketchFactors, config: SolverConfig, generator: torch.Generator):
        self.factors = factors
        self.rule = ADAPTIVE_RULES.get(config.method)
        self.theta = config.theta
        self.per_slice = config.per_slice_sketch
        self.generator = generator

    def __call__(self, residual: torch.Tensor, trace: RunTrace) -> Move:
        factors = self.factors
        losses = None
        if self.rule is not None or trace.loss_tables is not None:
            losses = factors.losses(residual)
            if trace.loss_tables is not None:
                trace.loss_tables.append(losses)
        if self.per_slice:
            return self._per_slice_move(residual)
        if self.rule is None or losses is None:
            chosen = (
                sample_categorical(factors.left_probs, self.generator),
                sample_categorical(factors.right_probs, self.generator),
            )
        else:
            base_probs = (factors.left_probs, factors.right_probs)
            picked = select_index(losses, self.rule, base_probs, self.theta, self.generator)
            # Every sketched equation holds but the run has not converged.
            chosen = picked if picked is not None else uniform_pair(*factors.shape, self.generator)
        sketched = factors.sketch_pair(residual, *chosen)
        return Move(factors.lift(*chosen, sketched), chosen, factors.sp.frobenius_sq(sketched))

    def _per_slice_move(self, residual: torch.Tensor) -> Move:
        factors = self.factors
        sp = factors.sp
        updates = []
        loss = 0.0
        for k in range(residual.shape[0]):
            rows = factors.left_block(sample_categorical(factors.left_probs, self.generator))
            cols = factors.right_block(sample_categorical(factors.right_probs, self.generator))
            sketched = (
                factors.p[k, rows.start : rows.stop]
                @ residual[k]
                @ factors.q[k, :, cols.start : cols.stop]
            )
            updates.append(
                factors.left_lift[k, :, rows.start : rows.stop]
                @ sketched
                @ factors.right_lift[k, cols.start : cols.stop]
            )
            loss += float(sp.slice_weights[k]) * float(sketched.abs().square().sum())
        return Move(torch.stack(updates), None, loss / sp.tube_length)


class StreamStep:
    """Draw fresh Gaussian or sampling sketches every iteration."""

    def __init__(self, sp: SpectralProblem, config: SolverConfig, generator: torch.Generator):
        self.sp = sp
        self.config = config
        self.generator = generator
        self.m = sp.a_hat.shape[1]
        self.n = sp.b_hat.shape[2]

    def _draw(self, rows: int, width: int, tube_length: int) -> SketchOperator:
        if self.config.stream_kind == "gaussian":
            return gaussian_sketch(rows, width, tube_length, self.generator)
        return sampling_sketch(rows, width, tube_length, self.generator)

    def _spectra(self, rows: int, width: int) -> torch.Tensor:
        h = self.sp.a_hat.shape[0]
        if self.config.per_slice_sketch:
            # One real realization per Fourier slice.
            draws = [self._draw(rows, width, 1).tensor.frontal(0) for _ in range(h)]
            return torch.stack(draws).to(torch.complex128)
        return half_spectrum(self._draw(rows, width, self.sp.tube_length).tensor.data)

    def __call__(self, residual: torch.Tensor, trace: RunTrace) -> Move:
        s_hat = self._spectra(self.m, self.config.left_sketch_size)
        v_hat = self._spectra(self.n, self.config.right_sketch_size)
        p, left_lift = left_factor(self.sp, s_hat)
        q, right_lift = right_factor(self.sp, v_hat)
        sketched = p @ residual @ q
        return Move(left_lift @ sketched @ right_lift, None, self.sp.frobenius_sq(sketched))


def solve(problem: Problem, config: SolverConfig) -> tuple[TubalMatrix, RunTrace]:
    """Run a sketch-and-project method until the RRN, iteration or time limit is hit.

    Args:
        problem: The consistent equation A*X*B = C.
        config: Method, sketches, stopping rules and seed.

    Returns:
        The final iterate and the run's trace.
    """
    config.validate()
    _, r, s, _, l = problem.dims
    started = time.perf_counter()
    preset = resolve_preset(problem, config)
    if preset is not None:
        weights = preset.weights
    elif config.weights is not None:
        weights = config.weights
    else:
        weights = WeightPair.identity(r, s, l)
    sp = SpectralProblem.build(problem, weights)
    generator = torch.Generator().manual_seed(config.seed)
    step: StepRule
    if config.method == "TESP-stream" or preset is None:
        step = StreamStep(sp, config, generator)
    else:
        factors = build_factors(sp, preset.left_set, preset.right_set)
        step = FiniteSetStep(factors, config, generator)
    x_hat = initial_iterate(sp, problem, config)

    trace = RunTrace(
        method=method_label(config, preset),
        theory_applicable=starts_at_zero(config),
        precompute_s=time.perf_counter() - started,
        loss_tables=[] if config.record_losses else None,
    )
    LOGGER.info(
        "Running %s on (m, r, s, n, l) = %s with seed %d.", trace.method, problem.dims, config.seed
    )
    residual = sp.residual(x_hat)
    recorder = TraceRecorder(sp, problem, config, trace, residual)
    status = recorder.observe(0, x_hat, residual)
    iteration = 0
    while status is None:
        move = step(residual, trace)
        x_hat = enforce_real_slices(x_hat - move.update, l)
        iteration += 1
        residual = sp.residual(x_hat)
        status = recorder.observe(iteration, x_hat, residual, move.chosen, move.loss)
    return from_half(x_hat, l), recorder.finish(status)
