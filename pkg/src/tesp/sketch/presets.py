"""Contains the Kaczmarz / coordinate-descent special cases of sketch-and-project.

Each preset fixes which slices of A and B are sampled and the matching weights:

| preset      | left (A side)                  | right (B side)                 |
|-------------|--------------------------------|--------------------------------|
| TERK-both   | horizontal slices, M = I       | lateral slices, N = I          |
| TERK-left   | horizontal slices, M = I       | not sampled, N = I             |
| TERK-right  | not sampled, M = I             | lateral slices, N = I          |
| TERCD-both  | lateral slices, M = A^T A      | horizontal slices, N = B B^T   |
| TERCD-left  | lateral slices, M = A^T A      | not sampled, N = I             |
| TERCD-right | not sampled, M = I             | horizontal slices, N = B B^T   |
| TERK-RCD    | horizontal slices, M = I       | horizontal slices, N = B B^T   |
| TERCD-RK    | lateral slices, M = A^T A      | lateral slices, N = I          |
"""

from __future__ import annotations

import dataclasses
import logging
from typing import Literal, get_args

import torch

from tesp.algebra import TubalMatrix, WeightPair, identity, is_t_spd, t_product, t_transpose
from tesp.errors import PresetError

from .operators import SketchOperator, SketchSet

LOGGER = logging.getLogger(__name__)

PresetName = Literal[
    "TERK-both",
    "TERK-left",
    "TERK-right",
    "TERCD-both",
    "TERCD-left",
    "TERCD-right",
    "TERK-RCD",
    "TERCD-RK",
    "custom",
]
SliceSampling = Literal["none", "horizontal", "lateral"]

PRESET_SAMPLING: dict[str, tuple[SliceSampling, SliceSampling]] = {
    "TERK-both": ("horizontal", "lateral"),
    "TERK-left": ("horizontal", "none"),
    "TERK-right": ("none", "lateral"),
    "TERCD-both": ("lateral", "horizontal"),
    "TERCD-left": ("lateral", "none"),
    "TERCD-right": ("none", "horizontal"),
    "TERK-RCD": ("horizontal", "horizontal"),
    "TERCD-RK": ("lateral", "lateral"),
}


@dataclasses.dataclass(frozen=True, eq=False)
class MethodPreset:
    """Left and right sketch sets plus the weights of one sketch-and-project method."""

    left_set: SketchSet
    right_set: SketchSet
    weights: WeightPair
    name: PresetName = "custom"


def preset_names() -> tuple[str, ...]:
    return tuple(name for name in get_args(PresetName) if name != "custom")


def _slice_probs(norms_sq: torch.Tensor, what: str) -> torch.Tensor:
    total = norms_sq.sum()
    if float(total) <= 0.0:
        raise PresetError(f"Cannot sample slices of a zero {what}.")
    return norms_sq / total


def _gram_weight(gram: TubalMatrix, label: str, semidefinite: bool) -> TubalMatrix:
    if is_t_spd(gram):
        return gram
    if not semidefinite:
        raise PresetError(
            f"{label} is not T-positive definite (rank-deficient operand); "
            "pass semidefinite=True to use the seminorm."
        )
    LOGGER.warning("%s is only semidefinite; the weighted norm is a seminorm.", label)
    return gram


def _left_side(
    sampling: SliceSampling, a: TubalMatrix, semidefinite: bool
) -> tuple[SketchSet, TubalMatrix]:
    m, r, l = a.shape
    if sampling == "none":
        return SketchSet.full(m, l), identity(r, l)
    elif sampling == "horizontal":
        eye = identity(m, l)
        operators = [SketchOperator(eye.lateral_slice(i), "lateral_slice") for i in range(m)]
        probs = _slice_probs(a.data.square().sum(dim=(1, 2)), "A")
        return SketchSet(tuple(operators), probs), identity(r, l)
    elif sampling == "lateral":
        # S_i = A * I_r(:, i, :) is the i-th lateral slice of A.
        operators = [SketchOperator(a.lateral_slice(i), "custom") for i in range(r)]
        probs = _slice_probs(a.data.square().sum(dim=(0, 2)), "A")
        gram = t_product(t_transpose(a), a)
        return SketchSet(tuple(operators), probs), _gram_weight(gram, "M = A^T*A", semidefinite)
    else:
        raise PresetError(f"Unsupported slice sampling: {sampling}.")


def _right_side(
    sampling: SliceSampling, b: TubalMatrix, semidefinite: bool
) -> tuple[SketchSet, TubalMatrix]:
    s, n, l = b.shape
    if sampling == "none":
        return SketchSet.full(n, l), identity(s, l)
    elif sampling == "lateral":
        eye = identity(n, l)
        operators = [SketchOperator(eye.lateral_slice(j), "lateral_slice") for j in range(n)]
        probs = _slice_probs(b.data.square().sum(dim=(0, 2)), "B")
        return SketchSet(tuple(operators), probs), identity(s, l)
    elif sampling == "horizontal":
        # V_j = B^T * I_s(:, j, :) is the t-transpose of the j-th horizontal slice of B.
        b_t = t_transpose(b)
        operators = [SketchOperator(b_t.lateral_slice(j), "custom") for j in range(s)]
        probs = _slice_probs(b.data.square().sum(dim=(1, 2)), "B")
        gram = t_product(b, b_t)
        return SketchSet(tuple(operators), probs), _gram_weight(gram, "N = B*B^T", semidefinite)
    else:
        raise PresetError(f"Unsupported slice sampling: {sampling}.")


def build_preset(
    name: str, a: TubalMatrix, b: TubalMatrix, semidefinite: bool = False
) -> MethodPreset:
    """Build the sketch sets and weights of a special-case method.

    Args:
        name: One of the eight preset names.
        a: The left coefficient A (m x r x l).
        b: The right coefficient B (s x n x l).
        semidefinite: Accept rank-deficient A^T*A or B*B^T weights as seminorms.

    Returns:
        The preset with slice-norm proportional probabilities.
    """
    if name not in PRESET_SAMPLING:
        raise PresetError(f"Unsupported preset: {name}.")
    left_sampling, right_sampling = PRESET_SAMPLING[name]
    left_set, m_weight = _left_side(left_sampling, a, semidefinite)
    right_set, n_weight = _right_side(right_sampling, b, semidefinite)
    weights = WeightPair(m_weight, n_weight, semidefinite=semidefinite)
    LOGGER.debug(
        "Built preset %s with q_S=%d, q_V=%d.", name, left_set.size, right_set.size
    )
    return MethodPreset(left_set, right_set, weights, name)  # type: ignore[arg-type]
