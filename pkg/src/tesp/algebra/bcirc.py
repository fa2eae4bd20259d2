"""Contains the explicit block-circulant oracle (bcirc, unfold, fold).

These build dense matrices and exist for verification; every expansion is checked
against an entry budget.
"""

from __future__ import annotations

import torch

from tesp.errors import OracleBudgetError, ShapeError

from .tubal import TubalMatrix

# Largest dense block-circulant matrix the oracle builds by default.
DEFAULT_MAX_ENTRIES = 40_000


def check_budget(rows: int, cols: int, max_entries: int = DEFAULT_MAX_ENTRIES) -> None:
    if rows * cols > max_entries:
        raise OracleBudgetError(
            f"Expansion to {rows}x{cols} exceeds the oracle budget of {max_entries} entries."
        )


def bcirc_expand(a: TubalMatrix, max_entries: int = DEFAULT_MAX_ENTRIES) -> torch.Tensor:
    """Block-circulant ml x nl matrix with block (i, j) equal to A_((i - j) mod l)."""
    m, n, l = a.shape
    check_budget(m * l, n * l, max_entries)
    steps = torch.arange(l)
    index = (steps[:, None] - steps[None, :]) % l
    blocks = a.data.permute(2, 0, 1)[index]
    return blocks.permute(0, 2, 1, 3).reshape(l * m, l * n)


def unfold(a: TubalMatrix) -> torch.Tensor:
    """Frontal slices stacked vertically, an ml x n matrix."""
    m, n, l = a.shape
    return a.data.permute(2, 0, 1).reshape(l * m, n)


def fold(matrix: torch.Tensor, tube_length: int) -> TubalMatrix:
    """Inverse of unfold; also folds the first block column of a bcirc matrix."""
    rows, cols = matrix.shape
    if rows % tube_length != 0:
        raise ShapeError(f"Cannot fold {rows} rows into tubes of length {tube_length}.")
    return TubalMatrix(matrix.reshape(tube_length, rows // tube_length, cols).permute(1, 2, 0))
