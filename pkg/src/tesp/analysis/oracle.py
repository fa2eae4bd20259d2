"""Contains the brute-force sketch-and-project step in block-circulant matrix space.

bcirc carries the t-product to the matrix product, so the update

    X+ = X - M^-1 A^T E (A X B - C) G B^T N^-1

can be evaluated with dense ml x nl matrices and folded back. Used to verify the
Fourier-domain step.
"""

from __future__ import annotations

import torch

from tesp.algebra import TubalMatrix, WeightPair, bcirc_expand, fold
from tesp.algebra.bcirc import DEFAULT_MAX_ENTRIES
from tesp.errors import ShapeError
from tesp.sketch import SketchOperator
from tesp.solver import Problem


def _inverse(matrix: torch.Tensor, semidefinite: bool) -> torch.Tensor:
    return torch.linalg.pinv(matrix, hermitian=True) if semidefinite else torch.linalg.inv(matrix)


def oracle_step(
    x: TubalMatrix,
    problem: Problem,
    s: SketchOperator,
    v: SketchOperator,
    w: WeightPair,
    max_entries: int = DEFAULT_MAX_ENTRIES,
) -> TubalMatrix:
    """One sketch-and-project update computed on explicit block-circulant matrices.

    Raises:
        OracleBudgetError: If any expansion exceeds max_entries entries.
    """
    _, r, s_dim, _, l = problem.dims
    if x.shape != (r, s_dim, l):
        raise ShapeError(f"X must be {r}x{s_dim}x{l}, got {x.shape}.")

    def expand(t: TubalMatrix) -> torch.Tensor:
        return bcirc_expand(t, max_entries=max_entries)

    a, b, c = expand(problem.A), expand(problem.B), expand(problem.C)
    bs, bv = expand(s.tensor), expand(v.tensor)
    m_inv = _inverse(expand(w.M), w.semidefinite)
    n_inv = _inverse(expand(w.N), w.semidefinite)
    bx = expand(x)

    left = bs @ torch.linalg.pinv(bs.T @ a @ m_inv @ a.T @ bs) @ bs.T
    right = bv @ torch.linalg.pinv(bv.T @ b.T @ n_inv @ b @ bv) @ bv.T
    updated = bx - m_inv @ a.T @ left @ (a @ bx @ b - c) @ right @ b.T @ n_inv
    return fold(updated[:, :s_dim], l)
