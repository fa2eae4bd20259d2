"""Contains tubal matrices, their Fourier representation and the t-product.

A tubal matrix in K_l^{m x n} is stored as a real (m, n, l) tensor; frontal slice k
is data[:, :, k]. Fourier slices are stored with the slice index first, (l, m, n), so
that batched matrix products act on all slices at once.

The forward transform along the tube is the unnormalized DFT and the inverse carries
the 1/l factor, which gives ||A||_F^2 = (1/l) sum_k ||A_hat_k||_F^2. For real input
only slices 0..l//2 are computed; the rest follow by conjugate symmetry.
"""

from __future__ import annotations

import dataclasses
import logging
from typing import Literal, Sequence

import torch

from tesp.errors import DomainError, ParameterError, ShapeError

LOGGER = logging.getLogger(__name__)

TransposeMode = Literal["T", "ST", "R"]

# Relative tolerance for the conjugate-symmetry contract of real-origin spectra.
CONJUGATE_SYMMETRY_RTOL = 1e-12


def half_length(tube_length: int) -> int:
    """Number of Fourier slices computed for real input, ceil((l + 1) / 2)."""
    return tube_length // 2 + 1


def slice_weights(tube_length: int) -> torch.Tensor:
    """Multiplicity of each half-spectrum slice in the full spectrum."""
    weights = torch.full((half_length(tube_length),), 2.0, dtype=torch.float64)
    weights[0] = 1.0
    if tube_length % 2 == 0:
        weights[-1] = 1.0
    return weights


def half_spectrum(data: torch.Tensor) -> torch.Tensor:
    """Fourier slices 0..l//2 of a real (m, n, l) tensor as a complex (h, m, n) stack.

    The self-conjugate slices (k = 0 and k = l/2 for even l) are real in exact
    arithmetic; their imaginary parts are zeroed.
    """
    tube_length = data.shape[-1]
    half = torch.fft.rfft(data, dim=-1).permute(2, 0, 1).contiguous()
    half[0].imag.zero_()
    if tube_length % 2 == 0:
        half[-1].imag.zero_()
    return half


def from_half_spectrum(half: torch.Tensor, tube_length: int) -> torch.Tensor:
    """Inverse of half_spectrum: real (m, n, l) tensor from an (h, m, n) stack."""
    if half.shape[0] != half_length(tube_length):
        raise ShapeError(
            f"Expected {half_length(tube_length)} Fourier slices for tube length "
            f"{tube_length}, got {half.shape[0]}."
        )
    return torch.fft.irfft(half.permute(1, 2, 0), n=tube_length, dim=-1).contiguous()


def conjugate_fill(half: torch.Tensor, tube_length: int) -> torch.Tensor:
    """Complete an (h, m, n) half spectrum to all l slices."""
    tail = half[1 : tube_length - half.shape[0] + 1].flip(0).conj()
    return torch.cat([half, tail], dim=0)


def spectral_frobenius_sq(half: torch.Tensor, tube_length: int) -> torch.Tensor:
    """||X||_F^2 of the tubal matrix whose half spectrum is given."""
    per_slice = half.abs().square().sum(dim=(-2, -1))
    return (slice_weights(tube_length) * per_slice).sum() / tube_length


@dataclasses.dataclass(frozen=True, eq=False)
class TubalMatrix:
    """Real m x n matrix of length-l tubes."""

    data: torch.Tensor

    def __post_init__(self) -> None:
        data = torch.as_tensor(self.data, dtype=torch.float64)
        if data.ndim != 3 or min(data.shape) < 1:
            raise ShapeError(f"Expected a non-empty (m, n, l) array, got {tuple(data.shape)}.")
        if not bool(torch.isfinite(data).all()):
            raise ParameterError("Tubal matrix entries must be finite.")
        object.__setattr__(self, "data", data.detach().clone().contiguous())

    @property
    def shape(self) -> tuple[int, int, int]:
        m, n, l = self.data.shape
        return m, n, l

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def tube_length(self) -> int:
        return self.data.shape[2]

    @property
    def T(self) -> TubalMatrix:
        """The t-transpose."""
        return t_transpose(self, "T")

    def frontal(self, k: int) -> torch.Tensor:
        """Frontal slice A_(k) (0-based)."""
        return self.data[:, :, k]

    def horizontal_slice(self, i: int) -> TubalMatrix:
        """A_(i,:,:) as a 1 x n x l tubal matrix."""
        return TubalMatrix(self.data[i : i + 1])

    def lateral_slice(self, j: int) -> TubalMatrix:
        """A_(:,j,:) as an m x 1 x l tubal matrix."""
        return TubalMatrix(self.data[:, j : j + 1])

    def half_spectrum(self) -> torch.Tensor:
        return half_spectrum(self.data)

    def norm(self) -> float:
        """Frobenius norm."""
        return float(torch.linalg.vector_norm(self.data))

    def __matmul__(self, other: TubalMatrix) -> TubalMatrix:
        return t_product(self, other)

    def __add__(self, other: TubalMatrix) -> TubalMatrix:
        _check_same_shape(self, other)
        return TubalMatrix(self.data + other.data)

    def __sub__(self, other: TubalMatrix) -> TubalMatrix:
        _check_same_shape(self, other)
        return TubalMatrix(self.data - other.data)

    def __neg__(self) -> TubalMatrix:
        return TubalMatrix(-self.data)

    def __mul__(self, scalar: float) -> TubalMatrix:
        return TubalMatrix(self.data * scalar)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        m, n, l = self.shape
        return f"TubalMatrix({m}x{n}x{l})"


def _check_same_shape(a: TubalMatrix, b: TubalMatrix) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"Shape mismatch: {a.shape} vs {b.shape}.")


def from_half(half: torch.Tensor, tube_length: int) -> TubalMatrix:
    """Tubal matrix from its (h, m, n) half spectrum."""
    return TubalMatrix(from_half_spectrum(half, tube_length))


def from_frontal_slices(slices: Sequence[torch.Tensor]) -> TubalMatrix:
    """Stack frontal slices A_(1), ..., A_(l) into a tubal matrix."""
    if len(slices) == 0:
        raise ShapeError("At least one frontal slice is required.")
    return TubalMatrix(torch.stack([torch.as_tensor(s, dtype=torch.float64) for s in slices], -1))


def zeros(rows: int, cols: int, tube_length: int) -> TubalMatrix:
    return TubalMatrix(torch.zeros(rows, cols, tube_length, dtype=torch.float64))


def identity(dim: int, tube_length: int) -> TubalMatrix:
    """Identity tubal matrix: first frontal slice I, the others zero."""
    data = torch.zeros(dim, dim, tube_length, dtype=torch.float64)
    data[:, :, 0] = torch.eye(dim, dtype=torch.float64)
    return TubalMatrix(data)


def random_normal(
    rows: int, cols: int, tube_length: int, generator: torch.Generator
) -> TubalMatrix:
    """Tubal matrix with i.i.d. standard normal entries."""
    return TubalMatrix(
        torch.randn(rows, cols, tube_length, dtype=torch.float64, generator=generator)
    )


@dataclasses.dataclass(frozen=True, eq=False)
class SpectralTubal:
    """Per-frontal-slice Fourier representation of a tubal matrix.

    slices has shape (l, m, n). When origin_real is set, slice k and slice l - k are
    complex conjugates.
    """

    slices: torch.Tensor
    origin_real: bool = True

    def __post_init__(self) -> None:
        slices = torch.as_tensor(self.slices).to(torch.complex128)
        if slices.ndim != 3 or min(slices.shape) < 1:
            raise ShapeError(f"Expected a non-empty (l, m, n) stack, got {tuple(slices.shape)}.")
        if self.origin_real:
            tube_length = slices.shape[0]
            mirrored = slices[(-torch.arange(tube_length)) % tube_length].conj()
            scale = max(float(slices.abs().max()), 1.0)
            if float((slices - mirrored).abs().max()) > CONJUGATE_SYMMETRY_RTOL * scale:
                raise DomainError("Fourier slices are not conjugate-symmetric.")
        object.__setattr__(self, "slices", slices.detach().clone())

    @property
    def tube_length(self) -> int:
        return self.slices.shape[0]

    def __getitem__(self, k: int) -> torch.Tensor:
        return self.slices[k]


def dft_cube(t: TubalMatrix) -> SpectralTubal:
    """Unnormalized DFT along the tube dimension."""
    half = half_spectrum(t.data)
    return SpectralTubal(conjugate_fill(half, t.tube_length), origin_real=True)


def idft_cube(s: SpectralTubal, tube_length: int | None = None) -> TubalMatrix:
    """Inverse DFT along the tube dimension (carries the 1/l factor)."""
    if tube_length is not None and tube_length != s.tube_length:
        raise ShapeError(f"Expected {tube_length} Fourier slices, got {s.tube_length}.")
    if s.origin_real:
        return from_half(s.slices[: half_length(s.tube_length)], s.tube_length)
    data = torch.fft.ifft(s.slices, dim=0).permute(1, 2, 0)
    scale = max(float(data.abs().max()), 1.0)
    if float(data.imag.abs().max()) > 1e-9 * scale:
        raise DomainError("Inverse transform is not real; the spectrum has no real origin.")
    return TubalMatrix(data.real)


def t_product(a: TubalMatrix, b: TubalMatrix) -> TubalMatrix:
    """t-product a * b, computed slice-wise in the Fourier domain."""
    if a.cols != b.rows or a.tube_length != b.tube_length:
        raise ShapeError(f"Cannot t-multiply {a.shape} by {b.shape}.")
    return from_half(a.half_spectrum() @ b.half_spectrum(), a.tube_length)


def t_transpose(a: TubalMatrix, mode: TransposeMode = "T") -> TubalMatrix:
    """Transpose a tubal matrix.

    Args:
        a: The tubal matrix.
        mode: "T" for the t-transpose, "ST" to transpose every frontal slice, "R" to
            reverse frontal slices 2..l.

    Returns:
        The transposed tubal matrix.
    """
    reverse = (-torch.arange(a.tube_length)) % a.tube_length
    if mode == "T":
        return TubalMatrix(a.data.transpose(0, 1)[:, :, reverse])
    elif mode == "ST":
        return TubalMatrix(a.data.transpose(0, 1))
    elif mode == "R":
        return TubalMatrix(a.data[:, :, reverse])
    else:
        raise ParameterError(f"Unsupported transpose mode: {mode}.")


def spectral_kron(a_hat: torch.Tensor, b_hat: torch.Tensor) -> torch.Tensor:
    """Slice-wise Kronecker product of two (h, ., .) stacks."""
    h, m, n = a_hat.shape
    _, r, s = b_hat.shape
    return torch.einsum("kij,kpq->kipjq", a_hat, b_hat).reshape(h, m * r, n * s)


def t_kron(a: TubalMatrix, b: TubalMatrix) -> TubalMatrix:
    """t-Kronecker product; Fourier slices are A_hat_k kron B_hat_k."""
    if a.tube_length != b.tube_length:
        raise ShapeError(f"Expected tube length {a.tube_length}, got {b.tube_length}.")
    return from_half(spectral_kron(a.half_spectrum(), b.half_spectrum()), a.tube_length)


def vec_t(a: TubalMatrix) -> TubalMatrix:
    """t-vectorization: lateral slices stacked in column order, mn x 1 x l."""
    m, n, l = a.shape
    return TubalMatrix(a.data.transpose(0, 1).reshape(n * m, 1, l))


def unvec_t(v: TubalMatrix, rows: int) -> TubalMatrix:
    """Inverse of vec_t for a tubal matrix with `rows` rows."""
    length, cols, l = v.shape
    if cols != 1 or length % rows != 0:
        raise ShapeError(f"Cannot fold a {length}x{cols}x{l} t-vector into {rows} rows.")
    return TubalMatrix(v.data[:, 0].reshape(length // rows, rows, l).transpose(0, 1))
