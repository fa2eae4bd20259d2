"""Contains closed-form convergence factors of the Kaczmarz / coordinate-descent presets."""

from __future__ import annotations

from typing import Literal

import torch

from tesp.algebra import TubalMatrix
from tesp.errors import PresetError
from tesp.sketch import PRESET_SAMPLING
from tesp.utils import linalg

GramSide = Literal["none", "outer", "inner"]

# Which per-slice Gram enters the factor on each side: "outer" is X X^H, "inner" X^H X.
_PRESET_GRAMS: dict[str, tuple[GramSide, GramSide]] = {
    "TERK-both": ("outer", "inner"),
    "TERK-left": ("outer", "none"),
    "TERK-right": ("none", "inner"),
    "TERCD-both": ("inner", "outer"),
    "TERCD-left": ("inner", "none"),
    "TERCD-right": ("none", "outer"),
    "TERK-RCD": ("outer", "outer"),
    "TERCD-RK": ("inner", "inner"),
}


def _side_factor(operand: TubalMatrix, gram: GramSide) -> torch.Tensor:
    """lambda^+_min of each Fourier-slice Gram over ||operand||_F^2, one value per slice."""
    tube_length = operand.tube_length
    if gram == "none":
        return torch.ones(tube_length, dtype=torch.float64)
    spectra = torch.fft.fft(operand.data, dim=-1).permute(2, 0, 1)
    grams = spectra @ spectra.mH if gram == "outer" else spectra.mH @ spectra
    norm_sq = operand.norm() ** 2
    if norm_sq == 0.0:
        raise PresetError("Convergence factor is undefined for a zero operand.")
    return linalg.smallest_positive_eigenvalue(grams) / norm_sq


def special_case_rho(name: str, a: TubalMatrix, b: TubalMatrix) -> float:
    """Convergence factor of a preset with slice-norm proportional sampling.

    The factor is 1 - min_k alpha_k beta_k where alpha_k and beta_k are the smallest
    positive eigenvalues of the relevant Gram of the k-th Fourier slices of A and B,
    each divided by the squared Frobenius norm of its operand.
    """
    if name not in PRESET_SAMPLING:
        raise PresetError(f"Unsupported preset: {name}.")
    left, right = _PRESET_GRAMS[name]
    product = _side_factor(a, left) * _side_factor(b, right)
    return min(max(1.0 - float(product.min()), 0.0), 1.0)
