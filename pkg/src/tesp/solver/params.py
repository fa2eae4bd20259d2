"""Contains the solver configuration."""

from __future__ import annotations

import dataclasses
from typing import Literal

from tesp.algebra import TubalMatrix, WeightPair
from tesp.errors import ParameterError
from tesp.sketch import MethodPreset, PresetName

MethodName = Literal["TESP-stream", "NTESP", "ATESP-MD", "ATESP-PR", "ATESP-CS"]
SelectionRule = Literal["MD", "PR", "CS"]
StreamSketchKind = Literal["gaussian", "sampling"]
StopStatus = Literal["converged", "iter_cap", "time_cap"]

ADAPTIVE_RULES: dict[str, SelectionRule] = {
    "ATESP-MD": "MD",
    "ATESP-PR": "PR",
    "ATESP-CS": "CS",
}


@dataclasses.dataclass
class SolverConfig:
    """Parameters of one sketch-and-project run."""

    method: MethodName = "NTESP"
    # Special-case preset built from the problem's A and B.
    preset: PresetName | None = None
    # Explicit sketch sets and weights; mutually exclusive with preset.
    sketches: MethodPreset | None = None
    # Accept rank-deficient weights of the TERCD presets as seminorms.
    semidefinite: bool = False

    # TESP-stream only: distribution and widths of the freshly drawn sketches.
    stream_kind: StreamSketchKind = "gaussian"
    left_sketch_size: int = 1
    right_sketch_size: int = 1
    # TESP-stream only: weights when neither preset nor sketches is given.
    weights: WeightPair | None = None

    # Convex combination parameter of the capped sampling rule.
    theta: float = 0.5
    # Stop once ||C - A*X*B||_F / ||C - A*X0*B||_F drops below this.
    rrn_tol: float = 1e-4
    max_iters: int = 1_000_000
    max_seconds: float = 600.0
    seed: int = 0
    # Draw independent sketches (or indices) per Fourier slice.
    per_slice_sketch: bool = False
    # Fast PR path: recompute the sketched residual table every this many iterations.
    residual_refresh_period: int = 1000
    # Initial iterate; defaults to the zero tubal matrix.
    x0: TubalMatrix | None = None
    # Keep every sketched loss table in the trace.
    record_losses: bool = False
    # Emit a DEBUG progress line every this many iterations.
    log_every: int = 10_000

    def validate(self) -> None:
        """Raise ParameterError on inconsistent settings."""
        if self.method not in ("TESP-stream", "NTESP", *ADAPTIVE_RULES):
            raise ParameterError(f"Unsupported method: {self.method}.")
        if not 0.0 <= self.theta <= 1.0:
            raise ParameterError(f"theta must lie in [0, 1], got {self.theta}.")
        if not self.rrn_tol > 0.0:
            raise ParameterError(f"rrn_tol must be positive, got {self.rrn_tol}.")
        if self.max_iters < 0 or self.max_seconds <= 0.0:
            raise ParameterError("max_iters must be >= 0 and max_seconds > 0.")
        if self.residual_refresh_period < 1 or self.log_every < 1:
            raise ParameterError("residual_refresh_period and log_every must be positive.")
        if self.preset is not None and self.sketches is not None:
            raise ParameterError("Pass either a preset or explicit sketches, not both.")
        if self.method == "TESP-stream":
            if min(self.left_sketch_size, self.right_sketch_size) < 1:
                raise ParameterError("Stream sketch sizes must be positive.")
            if self.stream_kind not in ("gaussian", "sampling"):
                raise ParameterError(f"Unsupported stream sketch kind: {self.stream_kind}.")
        else:
            if self.preset is None and self.sketches is None:
                raise ParameterError(f"{self.method} needs a preset or explicit sketch sets.")
            if self.weights is not None:
                raise ParameterError("Weights come from the preset or sketches for finite sets.")
        if self.per_slice_sketch and self.method in ADAPTIVE_RULES:
            raise ParameterError("per_slice_sketch applies to TESP-stream and NTESP only.")
