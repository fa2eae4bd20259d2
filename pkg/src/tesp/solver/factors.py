"""Contains the Fourier-domain pieces of the sketch-and-project update.

All arrays are half spectra: Fourier slices 0..l//2 stacked along the first axis.
With P = F^H S^H, where F F^H = (S^H A M^-1 A^H S)^+, and Q = V D, where
D D^H = (V^H B^H N^-1 B V)^+, one step reads

    X <- X - (M^-1 A^H P^H) (P R Q) (Q^H B^H N^-1),    R = A X B - C,

and the sketched loss of the pair is (1/l) sum_k ||(P R Q)_k||_F^2.
"""

from __future__ import annotations

import dataclasses
import logging
from typing import NamedTuple, Sequence

import torch

from tesp.algebra import WeightPair
from tesp.algebra.tubal import half_spectrum, slice_weights, spectral_frobenius_sq
from tesp.errors import ShapeError
from tesp.sketch import SketchSet
from tesp.utils import linalg

from .problem import Problem

LOGGER = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class SpectralProblem:
    """Half spectra of A, B, C and of the weight inverses."""

    a_hat: torch.Tensor
    b_hat: torch.Tensor
    c_hat: torch.Tensor
    weights: WeightPair
    tube_length: int
    slice_weights: torch.Tensor

    @classmethod
    def build(cls, problem: Problem, weights: WeightPair) -> SpectralProblem:
        _, r, s, _, l = problem.dims
        if (weights.r, weights.s, weights.tube_length) != (r, s, l):
            raise ShapeError(
                f"Weights ({weights.r}, {weights.s}, {weights.tube_length}) do not conform "
                f"to X of shape ({r}, {s}, {l})."
            )
        return cls(
            a_hat=half_spectrum(problem.A.data),
            b_hat=half_spectrum(problem.B.data),
            c_hat=half_spectrum(problem.C.data),
            weights=weights,
            tube_length=l,
            slice_weights=slice_weights(l),
        )

    def residual(self, x_hat: torch.Tensor) -> torch.Tensor:
        """A X B - C."""
        return self.a_hat @ x_hat @ self.b_hat - self.c_hat

    def frobenius_sq(self, stack: torch.Tensor) -> float:
        return float(spectral_frobenius_sq(stack, self.tube_length))

    def slice_energy(self, stack: torch.Tensor) -> torch.Tensor:
        """(1/l) sum_k w_k |stack_k|^2, entrywise."""
        weights = self.slice_weights[:, None, None] / self.tube_length
        return (weights * stack.abs().square()).sum(dim=0)

    def zeros_x(self) -> torch.Tensor:
        h = self.a_hat.shape[0]
        return torch.zeros(
            h, self.a_hat.shape[2], self.b_hat.shape[1], dtype=torch.complex128
        )

    def error_fmn(self, x_hat: torch.Tensor, x_star_hat: torch.Tensor) -> float:
        return float(self.weights.weighted_sq_half(x_hat - x_star_hat).clamp_min(0.0).sqrt())


def enforce_real_slices(x_hat: torch.Tensor, tube_length: int) -> torch.Tensor:
    """Zero the imaginary parts of the self-conjugate slices in place."""
    x_hat[0].imag.zero_()
    if tube_length % 2 == 0:
        x_hat[-1].imag.zero_()
    return x_hat


def left_factor(sp: SpectralProblem, s_hat: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
    """Return P = F^H S^H (h, tau, m) and the lift M^-1 A^H P^H (h, r, tau)."""
    a_minv = sp.a_hat @ sp.weights.m_inv_hat
    gram = s_hat.mH @ a_minv @ sp.a_hat.mH @ s_hat
    factor = linalg.psd_pinv_factor(gram)
    p = factor.mH @ s_hat.mH
    lift = sp.weights.m_inv_hat @ sp.a_hat.mH @ p.mH
    return p, lift


def right_factor(sp: SpectralProblem, v_hat: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
    """Return Q = V D (h, n, zeta) and the lift Q^H B^H N^-1 (h, zeta, s)."""
    b_v = sp.b_hat @ v_hat
    gram = b_v.mH @ sp.weights.n_inv_hat @ b_v
    factor = linalg.psd_pinv_factor(gram)
    q = v_hat @ factor
    lift = q.mH @ sp.b_hat.mH @ sp.weights.n_inv_hat
    return q, lift


def _offsets(widths: Sequence[int]) -> tuple[int, ...]:
    offsets = [0]
    for width in widths:
        offsets.append(offsets[-1] + width)
    return tuple(offsets)


class Block(NamedTuple):
    start: int
    stop: int


@dataclasses.dataclass(frozen=True, eq=False)
class SketchFactors:
    """Factors of every operator of a left and a right sketch set, stacked."""

    sp: SpectralProblem
    p: torch.Tensor
    left_lift: torch.Tensor
    q: torch.Tensor
    right_lift: torch.Tensor
    left_offsets: tuple[int, ...]
    right_offsets: tuple[int, ...]
    left_probs: torch.Tensor
    right_probs: torch.Tensor
    # Owning operator index of every stacked row of p / column of q.
    left_ids: torch.Tensor
    right_ids: torch.Tensor

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.left_offsets) - 1, len(self.right_offsets) - 1

    def left_block(self, i: int) -> Block:
        return Block(self.left_offsets[i], self.left_offsets[i + 1])

    def right_block(self, j: int) -> Block:
        return Block(self.right_offsets[j], self.right_offsets[j + 1])

    def sketch_all(self, residual: torch.Tensor) -> torch.Tensor:
        """Table of all sketched residuals P R Q, shape (h, sum tau, sum zeta)."""
        return self.p @ residual @ self.q

    def sketch_pair(self, residual: torch.Tensor, i: int, j: int) -> torch.Tensor:
        rows, cols = self.left_block(i), self.right_block(j)
        return self.p[:, rows.start : rows.stop] @ residual @ self.q[:, :, cols.start : cols.stop]

    def lift(self, i: int, j: int, sketched: torch.Tensor) -> torch.Tensor:
        """The update M^-1 A^H E R G B^H N^-1 of pair (i, j) from its sketched residual."""
        rows, cols = self.left_block(i), self.right_block(j)
        return (
            self.left_lift[:, :, rows.start : rows.stop]
            @ sketched
            @ self.right_lift[:, cols.start : cols.stop]
        )

    def block_losses(self, table: torch.Tensor) -> torch.Tensor:
        """Sketched losses f_ij (q_S x q_V) from a table of sketched residuals."""
        energy = self.sp.slice_energy(table)
        q_s, q_v = self.shape
        rows = torch.zeros(q_s, energy.shape[1], dtype=energy.dtype)
        rows.index_add_(0, self.left_ids, energy)
        return torch.zeros(q_s, q_v, dtype=energy.dtype).index_add_(1, self.right_ids, rows)

    def losses(self, residual: torch.Tensor) -> torch.Tensor:
        return self.block_losses(self.sketch_all(residual))

    def residual_maps(self) -> tuple[torch.Tensor, torch.Tensor]:
        """A M^-1 A^H P^H and Q^H B^H N^-1 B, which carry a sketched residual back to A X B."""
        return self.sp.a_hat @ self.left_lift, self.right_lift @ self.sp.b_hat


def operator_spectra(sketches: SketchSet) -> list[torch.Tensor]:
    return [half_spectrum(op.tensor.data) for op in sketches.operators]


def build_factors(sp: SpectralProblem, left: SketchSet, right: SketchSet) -> SketchFactors:
    """Precompute P, Q and the lifts for every operator of both sets."""
    m = sp.a_hat.shape[1]
    n = sp.b_hat.shape[2]
    if left.rows != m or right.rows != n:
        raise ShapeError(f"Sketches must have {m} (left) and {n} (right) rows.")
    if left.tube_length != sp.tube_length or right.tube_length != sp.tube_length:
        raise ShapeError(f"Expected sketches with tube length {sp.tube_length}.")
    left_parts = [left_factor(sp, s_hat) for s_hat in operator_spectra(left)]
    right_parts = [right_factor(sp, v_hat) for v_hat in operator_spectra(right)]
    left_widths = torch.tensor([op.width for op in left.operators])
    right_widths = torch.tensor([op.width for op in right.operators])
    return SketchFactors(
        sp=sp,
        p=torch.cat([p for p, _ in left_parts], dim=1),
        left_lift=torch.cat([lift for _, lift in left_parts], dim=2),
        q=torch.cat([q for q, _ in right_parts], dim=2),
        right_lift=torch.cat([lift for _, lift in right_parts], dim=1),
        left_offsets=_offsets([op.width for op in left.operators]),
        right_offsets=_offsets([op.width for op in right.operators]),
        left_probs=left.probs,
        right_probs=right.probs,
        left_ids=torch.repeat_interleave(torch.arange(left.size), left_widths),
        right_ids=torch.repeat_interleave(torch.arange(right.size), right_widths),
    )
