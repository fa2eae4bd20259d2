"""Contains image quality metrics."""

from __future__ import annotations

import math

import numpy as np

from tesp.errors import ParameterError, ShapeError


def psnr(restored: np.ndarray, reference: np.ndarray, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio 10 log10(peak^2 / MSE) in dB; inf for an exact match."""
    restored = np.asarray(restored, dtype=np.float64)
    reference = np.asarray(reference, dtype=np.float64)
    if restored.shape != reference.shape:
        raise ShapeError(f"Shape mismatch: {restored.shape} vs {reference.shape}.")
    if peak <= 0.0:
        raise ParameterError(f"peak must be positive, got {peak}.")
    mse = float(np.mean((restored - reference) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak**2 / mse)


def format_psnr(value: float) -> str:
    return "exact" if math.isinf(value) else f"{value:.4f} dB"
