"""Contains the per-iteration record of a solver run."""

from __future__ import annotations

import dataclasses
from typing import Any, NamedTuple

import torch

from .params import StopStatus


class IterationRecord(NamedTuple):
    """State after `iteration` steps; iteration 0 is the initial point."""

    iteration: int
    rrn: float
    # ||X - X_star||_F(M,N) when X_star is known.
    err_fmn: float | None
    # Sketch pair used for the step that produced this state.
    chosen: tuple[int, int] | None
    # Sketched loss f_ij(X) of that pair before the step.
    chosen_loss: float | None
    elapsed_s: float


@dataclasses.dataclass
class RunTrace:
    """Records of one run plus its terminal status."""

    method: str
    status: StopStatus = "iter_cap"
    records: list[IterationRecord] = dataclasses.field(default_factory=list)
    # False when the run starts away from zero, where the convergence theory is silent.
    theory_applicable: bool = True
    # Seconds spent on factor precomputation, excluded from elapsed_s.
    precompute_s: float = 0.0
    loss_tables: list[torch.Tensor] | None = None
    # (iteration, max |recursed - direct|) of the fast path's residual table.
    residual_drift: list[tuple[int, float]] = dataclasses.field(default_factory=list)

    @property
    def num_iterations(self) -> int:
        return self.records[-1].iteration if self.records else 0

    @property
    def final_rrn(self) -> float:
        return self.records[-1].rrn

    @property
    def elapsed_s(self) -> float:
        return self.records[-1].elapsed_s if self.records else 0.0

    def rrn_history(self) -> list[float]:
        return [record.rrn for record in self.records]

    def err_history(self) -> list[float] | None:
        errors = [record.err_fmn for record in self.records]
        if any(err is None for err in errors):
            return None
        return errors  # type: ignore[return-value]

    def chosen_indices(self) -> list[tuple[int, int] | None]:
        return [record.chosen for record in self.records[1:]]

    def to_rows(self, include_timing: bool = True) -> list[dict[str, Any]]:
        """Flat rows with columns iter, rrn, err_fmn, i, j (and elapsed_s)."""
        rows = []
        for record in self.records:
            row: dict[str, Any] = {
                "iter": record.iteration,
                "rrn": record.rrn,
                "err_fmn": record.err_fmn,
                "i": None if record.chosen is None else record.chosen[0],
                "j": None if record.chosen is None else record.chosen[1],
            }
            if include_timing:
                row["elapsed_s"] = record.elapsed_s
            rows.append(row)
        return rows
