"""Contains sketching tubal matrices and finite sketch sets."""

from __future__ import annotations

import dataclasses
import logging
from typing import Literal, Sequence

import torch

from tesp.algebra import TubalMatrix, identity
from tesp.errors import ParameterError, ShapeError

LOGGER = logging.getLogger(__name__)

SketchKind = Literal["gaussian", "sampling", "lateral_slice", "custom"]

# Tolerance on the probability simplex.
PROBS_ATOL = 1e-12


@dataclasses.dataclass(frozen=True, eq=False)
class SketchOperator:
    """A sketching tubal matrix, m x tau x l (left) or n x zeta x l (right)."""

    tensor: TubalMatrix
    kind: SketchKind = "custom"

    def __post_init__(self) -> None:
        if self.kind in ("gaussian", "sampling"):
            if bool(self.tensor.data[:, :, 1:].any()):
                raise ParameterError(f"A {self.kind} sketch must vanish beyond frontal slice 1.")
        if self.kind == "sampling":
            first = self.tensor.frontal(0)
            if not bool(((first == 0) | (first == 1)).all()) or not bool(
                (first.sum(dim=0) == 1).all()
            ):
                raise ParameterError("A sampling sketch needs exactly one 1 per column.")

    @property
    def rows(self) -> int:
        return self.tensor.rows

    @property
    def width(self) -> int:
        return self.tensor.cols

    @property
    def tube_length(self) -> int:
        return self.tensor.tube_length


def check_probs(probs: torch.Tensor, size: int) -> torch.Tensor:
    """Validate a probability vector of the given size and return it as float64."""
    probs = torch.as_tensor(probs, dtype=torch.float64)
    if probs.shape != (size,):
        raise ParameterError(f"Expected {size} probabilities, got shape {tuple(probs.shape)}.")
    if not bool(torch.isfinite(probs).all()) or bool((probs < 0).any()):
        raise ParameterError("Probabilities must be finite and non-negative.")
    if abs(float(probs.sum()) - 1.0) > PROBS_ATOL:
        raise ParameterError(f"Probabilities must sum to 1, got {float(probs.sum())}.")
    return probs


@dataclasses.dataclass(frozen=True, eq=False)
class SketchSet:
    """Finite indexed family of sketching operators with sampling probabilities."""

    operators: tuple[SketchOperator, ...]
    probs: torch.Tensor

    def __post_init__(self) -> None:
        operators = tuple(self.operators)
        if len(operators) == 0:
            raise ParameterError("A sketch set needs at least one operator.")
        outer = {(op.rows, op.tube_length) for op in operators}
        if len(outer) != 1:
            raise ShapeError(f"Sketch operators must share outer size and tube length: {outer}.")
        object.__setattr__(self, "operators", operators)
        object.__setattr__(self, "probs", check_probs(self.probs, len(operators)))

    @classmethod
    def uniform(cls, operators: Sequence[SketchOperator]) -> SketchSet:
        count = len(operators)
        return cls(tuple(operators), torch.full((count,), 1.0 / max(count, 1), dtype=torch.float64))

    @classmethod
    def full(cls, dim: int, tube_length: int) -> SketchSet:
        """The single identity sketch, i.e. the side is not sampled."""
        return cls.uniform([SketchOperator(identity(dim, tube_length), "custom")])

    @property
    def size(self) -> int:
        return len(self.operators)

    @property
    def rows(self) -> int:
        return self.operators[0].rows

    @property
    def tube_length(self) -> int:
        return self.operators[0].tube_length

    def __len__(self) -> int:
        return len(self.operators)

    def __getitem__(self, index: int) -> SketchOperator:
        return self.operators[index]


def gaussian_sketch(
    rows: int, width: int, tube_length: int, generator: torch.Generator
) -> SketchOperator:
    """Gaussian random tubal matrix: i.i.d. N(0, 1) first frontal slice, other slices zero."""
    if not 1 <= width <= rows:
        raise ParameterError(f"Sketch width must lie in [1, {rows}], got {width}.")
    data = torch.zeros(rows, width, tube_length, dtype=torch.float64)
    data[:, :, 0] = torch.randn(rows, width, dtype=torch.float64, generator=generator)
    return SketchOperator(TubalMatrix(data), "gaussian")


def sampling_sketch(
    rows: int,
    width: int,
    tube_length: int,
    generator: torch.Generator,
    probs: torch.Tensor | None = None,
) -> SketchOperator:
    """Random sampling tubal matrix: column j of slice 1 selects row i drawn from probs.

    Draws are i.i.d. categorical (with replacement); probs defaults to uniform.
    """
    if width < 1:
        raise ParameterError(f"Sketch width must be positive, got {width}.")
    if probs is None:
        probs = torch.full((rows,), 1.0 / rows, dtype=torch.float64)
    probs = check_probs(probs, rows)
    picks = torch.multinomial(probs, width, replacement=True, generator=generator)
    data = torch.zeros(rows, width, tube_length, dtype=torch.float64)
    data[picks, torch.arange(width), 0] = 1.0
    return SketchOperator(TubalMatrix(data), "sampling")
