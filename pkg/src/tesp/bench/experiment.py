"""Contains the experiment driver: trials x methods on one problem family.

Method names combine a selection rule and a preset:

    N<preset> or <preset>       nonadaptive sampling, e.g. NTERK-both, TERK-left
    A<preset>-MD|PR|CS          adaptive rules, e.g. ATERK-both-MD
    A<preset>-PR-fast           adaptive probabilities with residual recursion
    TESP-gaussian|sampling      freshly drawn sketches every iteration
    MERK-both|left|right        TERK presets on the block-circulant matrix expansion
    TRK                         TERK-left on the vectorized system (B^ST kron_t A) * vec_t(X)
"""

from __future__ import annotations

import dataclasses
import logging
import statistics
from collections import Counter
from pathlib import Path
from typing import Any, Literal, NamedTuple

import numpy as np

from tesp.algebra import TubalMatrix, fold, unvec_t
from tesp.errors import ParameterError
from tesp.sketch import PRESET_SAMPLING
from tesp.solver import (
    ADAPTIVE_RULES,
    MethodName,
    Problem,
    RunTrace,
    SolverConfig,
    fast_pr_solve,
    solve,
)
from tesp.utils import io

from .metrics import psnr
from .problems import (
    DEFAULT_BANDWIDTH,
    DEFAULT_CHANNEL_BLUR,
    DEFAULT_SIGMA,
    build_deblur_problem,
    expand_to_matrix_problem,
    gen_random_equation,
    observed_image,
    synthetic_image,
    vectorize_problem,
)

LOGGER = logging.getLogger(__name__)

ProblemKind = Literal["random", "deblur"]


class ParsedMethod(NamedTuple):
    method: MethodName
    preset: str | None
    stream_kind: Literal["gaussian", "sampling"] = "gaussian"
    fast: bool = False
    matrix_baseline: bool = False
    vectorized: bool = False


def parse_method(name: str) -> ParsedMethod:
    """Split a method name such as ATERK-both-CS into solver method and preset."""
    if name in ("TESP-gaussian", "TESP-sampling"):
        stream_kind = name.split("-")[1]
        return ParsedMethod("TESP-stream", None, stream_kind=stream_kind)  # type: ignore[arg-type]
    if name == "TRK":
        return ParsedMethod("NTESP", "TERK-left", vectorized=True)
    if name.startswith("MERK-"):
        preset = "TERK-" + name.removeprefix("MERK-")
        if preset in ("TERK-both", "TERK-left", "TERK-right"):
            return ParsedMethod("NTESP", preset, matrix_baseline=True)
    if name in PRESET_SAMPLING:
        return ParsedMethod("NTESP", name)
    if name.startswith("N") and name[1:] in PRESET_SAMPLING:
        return ParsedMethod("NTESP", name[1:])
    if name.startswith("A"):
        fast = name.endswith("-PR-fast")
        stem = name.removesuffix("-fast") if fast else name
        preset, _, rule = stem[1:].rpartition("-")
        if preset in PRESET_SAMPLING and f"ATESP-{rule}" in ADAPTIVE_RULES:
            return ParsedMethod(f"ATESP-{rule}", preset, fast=fast)  # type: ignore[arg-type]
    raise ParameterError(f"Unsupported method: {name}.")


@dataclasses.dataclass
class ExperimentSpec:
    """Parameters of one experiment grid."""

    # (m, r, s, n, l) of random equations; ignored for deblurring.
    dims: tuple[int, int, int, int, int] = (30, 10, 10, 30, 4)
    methods: tuple[str, ...] = ("NTERK-both",)
    trials: int = 10
    seed: int = 0
    problem_kind: ProblemKind = "random"

    # Deblurring: image file, or a synthetic image of image_size when no file is given.
    image_path: Path | None = None
    image_size: tuple[int, int] = (32, 24)
    # (m, n) of the blurred observation; None keeps the image size, larger values pad.
    observation_size: tuple[int, int] | None = None
    sigma: float = DEFAULT_SIGMA
    bandwidth: int = DEFAULT_BANDWIDTH
    h_matrix: tuple[tuple[float, ...], ...] = tuple(map(tuple, DEFAULT_CHANNEL_BLUR.tolist()))

    # Stopping rules and solver options shared by all methods.
    rrn_tol: float = 1e-4
    max_iters: int = 1_000_000
    max_seconds: float = 600.0
    theta: float = 0.5
    semidefinite: bool = False

    # Omit timing fields so that reruns give byte-identical files.
    include_timing: bool = True
    # Directory for per-trial CSV traces.
    trace_dir: Path | None = None

    def validate(self) -> None:
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}.")
        if self.problem_kind == "random" and min(self.dims) < 1:
            raise ParameterError(f"Dimensions must be positive, got {self.dims}.")
        if self.observation_size is not None and min(self.observation_size) < 1:
            raise ParameterError(f"Observation size must be positive, got {self.observation_size}.")
        if self.problem_kind not in ("random", "deblur"):
            raise ParameterError(f"Unsupported problem kind: {self.problem_kind}.")
        if not self.methods:
            raise ParameterError("At least one method is required.")
        for name in self.methods:
            parse_method(name)


@dataclasses.dataclass
class ResultRow:
    """Averages over the trials of one method."""

    method: str
    trials: int
    mean_iterations: float
    mean_cpu_s: float
    mean_final_rrn: float
    status_counts: dict[str, int]
    mean_precompute_s: float
    # Mean PSNR of the restored image (deblurring only).
    psnr: float | None = None

    def to_dict(self, include_timing: bool = True) -> dict[str, Any]:
        row = dataclasses.asdict(self)
        if not include_timing:
            del row["mean_cpu_s"], row["mean_precompute_s"]
        return row


class ExperimentResult(NamedTuple):
    rows: list[ResultRow]
    traces: dict[str, list[RunTrace]]
    # PSNR of the blurred observation (deblurring only).
    psnr_blurred: float | None
    # Restored image of the last trial per method (deblurring only).
    restored: dict[str, np.ndarray]


def trial_seeds(seed: int, trials: int) -> list[tuple[int, int]]:
    """(problem seed, solver seed) per trial, derived from the master seed by trial index."""
    children = np.random.SeedSequence(seed).spawn(trials)
    states = [child.generate_state(2) for child in children]
    return [(int(state[0]), int(state[1])) for state in states]


def _load_image(spec: ExperimentSpec) -> np.ndarray:
    if spec.image_path is not None:
        return io.load_image(spec.image_path)
    return synthetic_image(*spec.image_size)


def _make_problem(spec: ExperimentSpec, problem_seed: int, image: np.ndarray | None) -> Problem:
    if spec.problem_kind == "deblur":
        assert image is not None
        m, n = spec.observation_size or (None, None)
        return build_deblur_problem(
            image,
            spec.sigma,
            spec.bandwidth,
            np.array(spec.h_matrix, dtype=np.float64),
            m=m,
            n=n,
        )
    return gen_random_equation(*spec.dims, seed=problem_seed)


def run_method(
    problem: Problem, name: str, spec: ExperimentSpec, solver_seed: int
) -> tuple[TubalMatrix, RunTrace]:
    """One trial of one method; baseline solutions are folded back to r x s x l."""
    parsed = parse_method(name)
    _, r, _, _, l = problem.dims
    if parsed.matrix_baseline:
        problem = expand_to_matrix_problem(problem)
    elif parsed.vectorized:
        problem = vectorize_problem(problem)
    config = SolverConfig(
        method=parsed.method,
        preset=parsed.preset,  # type: ignore[arg-type]
        semidefinite=spec.semidefinite,
        stream_kind=parsed.stream_kind,
        theta=spec.theta,
        rrn_tol=spec.rrn_tol,
        max_iters=spec.max_iters,
        max_seconds=spec.max_seconds,
        seed=solver_seed,
    )
    x, trace = fast_pr_solve(problem, config) if parsed.fast else solve(problem, config)
    trace.method = name
    if parsed.matrix_baseline:
        # The first block column of bcirc(X) stacks the frontal slices.
        x = fold(x.data[:, : x.cols // l, 0], l)
    elif parsed.vectorized:
        x = unvec_t(x, r)
    return x, trace


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run every method on every trial and average iterations, time and final RRN.

    Time-cap and iteration-cap hits are recorded in status_counts, not raised.
    """
    spec.validate()
    image = _load_image(spec) if spec.problem_kind == "deblur" else None
    seeds = trial_seeds(spec.seed, spec.trials)
    traces: dict[str, list[RunTrace]] = {name: [] for name in spec.methods}
    psnrs: dict[str, list[float]] = {name: [] for name in spec.methods}
    restored: dict[str, np.ndarray] = {}
    psnr_blurred = None

    for trial, (problem_seed, solver_seed) in enumerate(seeds):
        problem = _make_problem(spec, problem_seed, image)
        if image is not None:
            psnr_blurred = psnr(observed_image(problem), image)
        for name in spec.methods:
            LOGGER.info("Trial %d/%d: %s.", trial + 1, spec.trials, name)
            x, trace = run_method(problem, name, spec, solver_seed)
            traces[name].append(trace)
            if image is not None:
                restored[name] = x.data.numpy()
                psnrs[name].append(psnr(restored[name], image))

    rows = [
        ResultRow(
            method=name,
            trials=spec.trials,
            mean_iterations=statistics.fmean(t.num_iterations for t in traces[name]),
            mean_cpu_s=statistics.fmean(t.elapsed_s for t in traces[name]),
            mean_final_rrn=statistics.fmean(t.final_rrn for t in traces[name]),
            status_counts=dict(sorted(Counter(t.status for t in traces[name]).items())),
            mean_precompute_s=statistics.fmean(t.precompute_s for t in traces[name]),
            psnr=statistics.fmean(psnrs[name]) if psnrs[name] else None,
        )
        for name in sorted(spec.methods)
    ]
    return ExperimentResult(rows, traces, psnr_blurred, restored)


def write_results(result: ExperimentResult, spec: ExperimentSpec, output_path: Path) -> None:
    """Write ResultRows as JSON lines and, when trace_dir is set, one CSV per trial."""
    io.write_jsonl(
        [row.to_dict(spec.include_timing) for row in result.rows], output_path
    )
    LOGGER.info("Wrote %d result rows to %s.", len(result.rows), output_path)
    if spec.trace_dir is None:
        return
    for name in sorted(result.traces):
        for trial, trace in enumerate(result.traces[name]):
            io.write_csv(
                trace.to_rows(spec.include_timing),
                spec.trace_dir / f"{name}_trial{trial:03d}.csv",
            )
