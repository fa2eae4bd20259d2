"""Tests for the explicit block-circulant oracle."""

from __future__ import annotations

import pytest
import torch

from tesp.algebra import bcirc_expand, fold, t_product, t_transpose, unfold
from tesp.errors import OracleBudgetError, ShapeError


def test_unfold_fold_inverse(make_tubal):
    a = make_tubal(3, 2, 4)
    assert unfold(a).shape == (12, 2)
    torch.testing.assert_close(fold(unfold(a), 4).data, a.data)


def test_first_block_column_is_unfold(make_tubal):
    a = make_tubal(2, 3, 3)
    torch.testing.assert_close(bcirc_expand(a)[:, :3], unfold(a))


@pytest.mark.parametrize("seed", range(10))
def test_bcirc_is_multiplicative(make_tubal, seed):
    a = make_tubal(3, 2, 4, seed)
    b = make_tubal(2, 3, 4, seed + 50)
    torch.testing.assert_close(
        bcirc_expand(t_product(a, b)), bcirc_expand(a) @ bcirc_expand(b), rtol=1e-12, atol=1e-12
    )


def test_bcirc_of_transpose_is_transpose(make_tubal):
    a = make_tubal(3, 2, 5)
    torch.testing.assert_close(bcirc_expand(t_transpose(a)), bcirc_expand(a).T)


def test_budget_and_shape_errors(make_tubal):
    with pytest.raises(OracleBudgetError):
        bcirc_expand(make_tubal(10, 10, 5), max_entries=100)
    with pytest.raises(ShapeError):
        fold(torch.zeros(7, 2, dtype=torch.float64), 3)
