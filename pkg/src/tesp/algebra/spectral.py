"""Contains slice-wise spectral operations: pseudoinverse, square root and weights."""

from __future__ import annotations

import dataclasses
import logging

import torch

from tesp.errors import DomainError, ShapeError
from tesp.utils import linalg

from .tubal import TubalMatrix, from_half, half_spectrum, identity, slice_weights

LOGGER = logging.getLogger(__name__)


def t_pinv(a: TubalMatrix) -> TubalMatrix:
    """Moore-Penrose inverse, computed per Fourier slice via SVD."""
    return from_half(linalg.pinv(a.half_spectrum()), a.tube_length)


def _check_square(a: TubalMatrix) -> None:
    if a.rows != a.cols:
        raise ShapeError(f"Expected square frontal slices, got {a.shape}.")


def is_t_spd(a: TubalMatrix, tol: float = 1e-10, semidefinite: bool = False) -> bool:
    """Check T-symmetric T-positive (semi)definiteness.

    Every Fourier slice must be Hermitian within tol (relative to its magnitude) and
    have smallest eigenvalue > tol, or >= -tol * lambda_max when semidefinite is set.
    """
    _check_square(a)
    half = a.half_spectrum()
    scale = max(float(half.abs().max()), 1.0)
    if float((half - half.mH).abs().max()) > tol * scale:
        return False
    eigvals = torch.linalg.eigvalsh(linalg.hermitian_part(half))
    if semidefinite:
        return bool((eigvals.min(dim=-1).values >= -tol * eigvals.abs().max().clamp_min(1.0)).all())
    return bool((eigvals.min(dim=-1).values > tol).all())


def t_sqrt(a: TubalMatrix, semidefinite: bool = False) -> TubalMatrix:
    """Square root of a T-SPD tubal matrix via Hermitian eigen square roots per slice.

    With semidefinite set, T-symmetric positive semidefinite input is accepted and
    zero eigenvalues stay zero.
    """
    if not is_t_spd(a, semidefinite=semidefinite):
        kind = "T-symmetric positive semidefinite" if semidefinite else "T-SPD"
        raise DomainError(f"Square root requires a {kind} tubal matrix.")
    return from_half(linalg.hermitian_power(a.half_spectrum(), 0.5), a.tube_length)


@dataclasses.dataclass(frozen=True, eq=False)
class WeightPair:
    """The weights M (r x r x l) and N (s x s x l) of the F(M, N) norm.

    Spectral inverses and square roots are cached as half spectra. In semidefinite
    mode the inverses are pseudoinverses and the norm is a seminorm.
    """

    M: TubalMatrix
    N: TubalMatrix
    semidefinite: bool = False

    m_inv_hat: torch.Tensor = dataclasses.field(init=False, repr=False)
    n_inv_hat: torch.Tensor = dataclasses.field(init=False, repr=False)
    m_sqrt_hat: torch.Tensor = dataclasses.field(init=False, repr=False)
    n_sqrt_hat: torch.Tensor = dataclasses.field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.M.tube_length != self.N.tube_length:
            raise ShapeError(
                f"Expected tube length {self.M.tube_length}, got {self.N.tube_length}."
            )
        for name, weight in (("M", self.M), ("N", self.N)):
            _check_square(weight)
            if not is_t_spd(weight, semidefinite=self.semidefinite):
                raise DomainError(
                    f"Weight {name} is not T-SPD; use semidefinite mode for a seminorm."
                )
        m_hat = self.M.half_spectrum()
        n_hat = self.N.half_spectrum()
        object.__setattr__(self, "m_inv_hat", linalg.hermitian_power(m_hat, -1.0))
        object.__setattr__(self, "n_inv_hat", linalg.hermitian_power(n_hat, -1.0))
        object.__setattr__(self, "m_sqrt_hat", linalg.hermitian_power(m_hat, 0.5))
        object.__setattr__(self, "n_sqrt_hat", linalg.hermitian_power(n_hat, 0.5))

    @classmethod
    def identity(cls, r: int, s: int, tube_length: int) -> WeightPair:
        return cls(identity(r, tube_length), identity(s, tube_length))

    @property
    def r(self) -> int:
        return self.M.rows

    @property
    def s(self) -> int:
        return self.N.rows

    @property
    def tube_length(self) -> int:
        return self.M.tube_length

    def check_conforms(self, a: TubalMatrix) -> None:
        if (a.rows, a.cols, a.tube_length) != (self.r, self.s, self.tube_length):
            raise ShapeError(
                f"Weights ({self.r}, {self.s}, {self.tube_length}) do not conform to {a.shape}."
            )

    def weighted_sq_half(self, x_hat: torch.Tensor) -> torch.Tensor:
        """||X||^2_F(M,N) from the half spectrum of X."""
        tube_length = self.tube_length
        weighted = self.m_sqrt_hat @ x_hat @ self.n_sqrt_hat
        per_slice = weighted.abs().square().sum(dim=(-2, -1))
        return (slice_weights(tube_length) * per_slice).sum() / tube_length


def fnorm_weighted(a: TubalMatrix, w: WeightPair) -> float:
    """||M^(1/2) * A * N^(1/2)||_F."""
    w.check_conforms(a)
    return float(w.weighted_sq_half(half_spectrum(a.data)).clamp_min(0.0).sqrt())
