"""Tests for the Kaczmarz / coordinate-descent presets."""

from __future__ import annotations

import logging

import pytest
import torch

from tesp.algebra import t_product, t_transpose
from tesp.errors import PresetError
from tesp.sketch import PRESET_SAMPLING, build_preset, preset_names


def test_preset_names():
    assert set(preset_names()) == set(PRESET_SAMPLING)
    assert len(preset_names()) == 8


@pytest.mark.parametrize("name", sorted(PRESET_SAMPLING))
def test_preset_set_sizes(small_problem, name):
    m, r, s, n, _ = small_problem.dims
    preset = build_preset(name, small_problem.A, small_problem.B)
    left, right = PRESET_SAMPLING[name]
    assert preset.left_set.size == {"none": 1, "horizontal": m, "lateral": r}[left]
    assert preset.right_set.size == {"none": 1, "lateral": n, "horizontal": s}[right]
    assert preset.name == name
    assert preset.left_set.rows == m and preset.right_set.rows == n


def test_terk_probabilities_follow_slice_norms(small_problem):
    a, b = small_problem.A, small_problem.B
    preset = build_preset("TERK-both", a, b)
    rows = a.data.square().sum(dim=(1, 2))
    cols = b.data.square().sum(dim=(0, 2))
    torch.testing.assert_close(preset.left_set.probs, rows / rows.sum())
    torch.testing.assert_close(preset.right_set.probs, cols / cols.sum())


def test_tercd_weights_are_grams(small_problem):
    a, b = small_problem.A, small_problem.B
    preset = build_preset("TERCD-both", a, b)
    torch.testing.assert_close(preset.weights.M.data, t_product(t_transpose(a), a).data)
    torch.testing.assert_close(preset.weights.N.data, t_product(b, t_transpose(b)).data)
    torch.testing.assert_close(preset.left_set[1].tensor.data, a.lateral_slice(1).data)


def test_rank_deficient_tercd(make_tubal, caplog):
    # A = U * V has rank 2 < r = 3.
    a = t_product(make_tubal(6, 2, 3), make_tubal(2, 3, 3, seed=1))
    b = make_tubal(3, 5, 3, seed=2)
    with pytest.raises(PresetError):
        build_preset("TERCD-left", a, b)
    with caplog.at_level(logging.WARNING, logger="tesp"):
        preset = build_preset("TERCD-left", a, b, semidefinite=True)
    assert preset.weights.semidefinite
    assert "seminorm" in caplog.text


def test_unknown_preset(small_problem):
    with pytest.raises(PresetError):
        build_preset("TERK-middle", small_problem.A, small_problem.B)
