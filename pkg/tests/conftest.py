"""Shared builders for the tesp tests."""

from __future__ import annotations

from typing import Callable

import pytest
import torch

from tesp.algebra import TubalMatrix, identity, random_normal, t_product, t_transpose
from tesp.bench import gen_random_equation
from tesp.solver import Problem


def spd(dim: int, tube_length: int, generator: torch.Generator) -> TubalMatrix:
    """G^T * G + I for a random G, which is T-SPD."""
    g = random_normal(dim, dim, tube_length, generator)
    return t_product(t_transpose(g), g) + identity(dim, tube_length)


@pytest.fixture
def generator() -> torch.Generator:
    return torch.Generator().manual_seed(1234)


@pytest.fixture
def make_tubal() -> Callable[..., TubalMatrix]:
    def make(rows: int, cols: int, tube_length: int, seed: int = 0) -> TubalMatrix:
        return random_normal(rows, cols, tube_length, torch.Generator().manual_seed(seed))

    return make


@pytest.fixture
def make_spd() -> Callable[..., TubalMatrix]:
    def make(dim: int, tube_length: int, seed: int = 0) -> TubalMatrix:
        return spd(dim, tube_length, torch.Generator().manual_seed(seed))

    return make


@pytest.fixture
def small_problem() -> Problem:
    return gen_random_equation(6, 3, 3, 5, 3, seed=7)


@pytest.fixture
def descent_problem() -> Problem:
    return gen_random_equation(20, 10, 10, 20, 4, seed=11)
