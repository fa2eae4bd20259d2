"""Contains batched linear algebra helpers for stacks of Fourier slices.

All helpers act on the trailing two dimensions and broadcast over leading ones.
"""

from __future__ import annotations

import torch

EPS = torch.finfo(torch.float64).eps


def hermitian_part(matrices: torch.Tensor) -> torch.Tensor:
    """Return (X + X^H) / 2."""
    return 0.5 * (matrices + matrices.mH)


def pinv(matrices: torch.Tensor) -> torch.Tensor:
    """Moore-Penrose inverse with cutoff max(rows, cols) * eps * sigma_max per matrix."""
    rows, cols = matrices.shape[-2:]
    return torch.linalg.pinv(matrices, rtol=max(rows, cols) * EPS)


def _kept_spectrum(matrices: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    eigvals, eigvecs = torch.linalg.eigh(hermitian_part(matrices))
    cutoff = matrices.shape[-1] * EPS * eigvals.abs().amax(dim=-1, keepdim=True)
    return eigvals, eigvecs, eigvals > cutoff


def hermitian_power(matrices: torch.Tensor, exponent: float) -> torch.Tensor:
    """Raise Hermitian positive semidefinite matrices to a real power.

    Eigenvalues under the pseudoinverse cutoff are treated as zero, so a negative
    exponent yields the pseudo-inverse power and a positive one keeps the null space.

    Args:
        matrices: Batch of Hermitian matrices.
        exponent: The power, e.g. 0.5 for the square root or -1 for the pseudoinverse.

    Returns:
        The batch U diag(lambda^exponent) U^H.
    """
    eigvals, eigvecs, kept = _kept_spectrum(matrices)
    safe = torch.where(kept, eigvals, torch.ones_like(eigvals))
    scaled = torch.where(kept, safe**exponent, torch.zeros_like(eigvals))
    return (eigvecs * scaled.unsqueeze(-2)) @ eigvecs.mH


def psd_pinv_factor(grams: torch.Tensor) -> torch.Tensor:
    """Return F with F F^H = pinv(grams) for Hermitian positive semidefinite grams.

    The factor is U diag(lambda^+)^(1/2) from the Hermitian eigendecomposition and
    exists for singular grams as well.
    """
    eigvals, eigvecs, kept = _kept_spectrum(grams)
    safe = torch.where(kept, eigvals, torch.ones_like(eigvals))
    scale = torch.where(kept, safe.rsqrt(), torch.zeros_like(eigvals))
    return eigvecs * scale.unsqueeze(-2)


def smallest_positive_eigenvalue(matrices: torch.Tensor) -> torch.Tensor:
    """Smallest eigenvalue above the pseudoinverse cutoff, per Hermitian matrix."""
    eigvals, _, kept = _kept_spectrum(matrices)
    masked = torch.where(kept, eigvals, torch.full_like(eigvals, torch.inf))
    smallest = masked.amin(dim=-1)
    # A zero matrix has no positive eigenvalue.
    return torch.where(torch.isinf(smallest), torch.zeros_like(smallest), smallest)


def orthonormal_range(matrix: torch.Tensor) -> torch.Tensor:
    """Orthonormal basis of the column space of a single matrix."""
    u, sigma, _ = torch.linalg.svd(matrix, full_matrices=False)
    if sigma.numel() == 0:
        return u
    cutoff = max(matrix.shape[-2:]) * EPS * sigma.max()
    return u[:, sigma > cutoff]
