"""Tests for the closed-form factors of the special-case presets."""

from __future__ import annotations

import numpy as np
import pytest

from tesp.algebra import identity, zeros
from tesp.analysis import special_case_rho
from tesp.errors import PresetError
from tesp.sketch import preset_names


@pytest.mark.parametrize("dim", [2, 4, 7])
def test_identity_operands(dim):
    eye = identity(dim, 3)
    assert special_case_rho("TERK-left", eye, eye) == pytest.approx(1.0 - 1.0 / dim)
    assert special_case_rho("TERK-both", eye, eye) == pytest.approx(1.0 - 1.0 / dim**2)


@pytest.mark.parametrize("name", preset_names())
def test_single_slice_formula(make_tubal, name):
    a, b = make_tubal(7, 3, 1), make_tubal(4, 6, 1, seed=1)
    a_mat, b_mat = a.frontal(0).numpy(), b.frontal(0).numpy()
    alpha = np.linalg.eigvalsh(a_mat.T @ a_mat)[0] / np.sum(a_mat**2)
    beta = np.linalg.eigvalsh(b_mat @ b_mat.T)[0] / np.sum(b_mat**2)
    expected = {
        "TERK-both": alpha * beta,
        "TERK-left": alpha,
        "TERK-right": beta,
        "TERCD-both": alpha * beta,
        "TERCD-left": alpha,
        "TERCD-right": beta,
        "TERK-RCD": alpha * beta,
        "TERCD-RK": alpha * beta,
    }[name]
    assert special_case_rho(name, a, b) == pytest.approx(1.0 - expected, rel=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_in_unit_interval(make_tubal, seed):
    a, b = make_tubal(5, 3, 4, seed), make_tubal(3, 6, 4, seed + 1)
    for name in preset_names():
        assert 0.0 <= special_case_rho(name, a, b) < 1.0


def test_errors(make_tubal):
    a, b = make_tubal(5, 3, 2), make_tubal(3, 4, 2)
    with pytest.raises(PresetError):
        special_case_rho("TERK-middle", a, b)
    with pytest.raises(PresetError):
        special_case_rho("TERK-left", zeros(5, 3, 2), b)
