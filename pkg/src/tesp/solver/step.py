"""Contains the single sketch-and-project step and the sketched loss table."""

from __future__ import annotations

import torch

from tesp.algebra import TubalMatrix, WeightPair
from tesp.algebra.tubal import from_half, half_spectrum
from tesp.errors import ShapeError
from tesp.sketch import SketchOperator, SketchSet

from .factors import SpectralProblem, build_factors, enforce_real_slices, left_factor, right_factor
from .problem import Problem


def _check_iterate(x: TubalMatrix, problem: Problem) -> None:
    _, r, s, _, l = problem.dims
    if x.shape != (r, s, l):
        raise ShapeError(f"X must be {r}x{s}x{l}, got {x.shape}.")


def tesp_step(
    x: TubalMatrix, problem: Problem, s: SketchOperator, v: SketchOperator, w: WeightPair
) -> TubalMatrix:
    """One sketch-and-project update.

    Returns X - M^-1*A^T*E*(A*X*B - C)*G*B^T*N^-1 with E = S(S^T A M^-1 A^T S)^+ S^T and
    G = V(V^T B^T N^-1 B V)^+ V^T, evaluated per Fourier slice.
    """
    _check_iterate(x, problem)
    m, _, _, n, l = problem.dims
    if s.rows != m or v.rows != n or s.tube_length != l or v.tube_length != l:
        raise ShapeError(f"Sketches must be {m}x.x{l} (left) and {n}x.x{l} (right).")
    sp = SpectralProblem.build(problem, w)
    p, left_lift = left_factor(sp, half_spectrum(s.tensor.data))
    q, right_lift = right_factor(sp, half_spectrum(v.tensor.data))
    x_hat = half_spectrum(x.data)
    update = left_lift @ (p @ sp.residual(x_hat) @ q) @ right_lift
    return from_half(enforce_real_slices(x_hat - update, l), l)


def sketched_losses(
    x: TubalMatrix, problem: Problem, left: SketchSet, right: SketchSet, w: WeightPair
) -> torch.Tensor:
    """Table f_ij(X) = ||A*X*B - C||^2_F(E_i, G_j) over all sketch pairs (q_S x q_V)."""
    _check_iterate(x, problem)
    sp = SpectralProblem.build(problem, w)
    factors = build_factors(sp, left, right)
    return factors.losses(sp.residual(half_spectrum(x.data)))
