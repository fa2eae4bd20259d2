"""Contains generators of benchmark equations: random Gaussian and color-image deblurring."""

from __future__ import annotations

import logging
import math

import numpy as np
import torch
from scipy.linalg import toeplitz

from tesp.algebra import (
    TubalMatrix,
    bcirc_expand,
    identity,
    random_normal,
    t_kron,
    t_product,
    t_transpose,
    vec_t,
)
from tesp.algebra.bcirc import check_budget
from tesp.errors import ParameterError, ShapeError
from tesp.solver import Problem

LOGGER = logging.getLogger(__name__)

# Cross-channel blur with circulant structure and unit row sums.
DEFAULT_CHANNEL_BLUR = np.array(
    [
        [0.3, 0.4, 0.3],
        [0.3, 0.3, 0.4],
        [0.4, 0.3, 0.3],
    ]
)
DEFAULT_SIGMA = 7.0
DEFAULT_BANDWIDTH = 3
# Largest expansion built for the matrix and vectorized baselines.
MATRIX_BASELINE_MAX_ENTRIES = 4_000_000


def gen_random_equation(m: int, r: int, s: int, n: int, l: int, seed: int) -> Problem:
    """Consistent A*X*B = C with standard normal A, X*, B and C = A*X**B."""
    if min(m, r, s, n, l) < 1:
        raise ParameterError(f"Dimensions must be positive, got {(m, r, s, n, l)}.")
    generator = torch.Generator().manual_seed(seed)
    a = random_normal(m, r, l, generator)
    x_star = random_normal(r, s, l, generator)
    b = random_normal(s, n, l, generator)
    return Problem(a, b, t_product(t_product(a, x_star), b), x_star)


def gaussian_toeplitz(rows: int, cols: int, sigma: float, bandwidth: int) -> np.ndarray:
    """Banded Gaussian blur exp(-d^2 / (2 sigma^2)) / (sigma sqrt(2 pi)) for |d| <= bandwidth.

    A taller matrix (rows > cols) pads the signal symmetrically: column j sits at
    row offset (rows - cols) // 2.
    """
    if sigma <= 0.0:
        raise ParameterError(f"sigma must be positive, got {sigma}.")
    if bandwidth < 0:
        raise ParameterError(f"bandwidth must be non-negative, got {bandwidth}.")
    if rows < cols:
        raise ShapeError(f"A blur matrix cannot shrink the image ({rows} < {cols}).")
    offsets = np.arange(rows, dtype=np.float64)
    kernel = np.exp(-(offsets**2) / (2.0 * sigma**2)) / (sigma * math.sqrt(2.0 * math.pi))
    kernel[offsets > bandwidth] = 0.0
    start = (rows - cols) // 2
    return toeplitz(kernel)[:, start : start + cols]


def channel_blur_tube(h_matrix: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    """First column (h_1, h_2, h_3) of a circulant cross-channel blur with unit row sums."""
    h_matrix = np.asarray(h_matrix, dtype=np.float64)
    if h_matrix.shape != (3, 3):
        raise ParameterError(f"H must be 3x3, got {h_matrix.shape}.")
    tube = h_matrix[:, 0]
    index = (np.arange(3)[:, None] - np.arange(3)[None, :]) % 3
    if not np.allclose(h_matrix, tube[index], rtol=0.0, atol=atol):
        raise ParameterError("H must be circulant.")
    if not np.allclose(h_matrix.sum(axis=1), 1.0, rtol=0.0, atol=atol):
        raise ParameterError("Every row of H must sum to one.")
    return tube


def build_deblur_problem(
    image: np.ndarray,
    sigma: float = DEFAULT_SIGMA,
    bandwidth: int = DEFAULT_BANDWIDTH,
    h_matrix: np.ndarray = DEFAULT_CHANNEL_BLUR,
    m: int | None = None,
    n: int | None = None,
) -> Problem:
    """Color deblurring as A*X*B = C with l = 3.

    The image (r x s x 3) becomes X* with one channel per frontal slice. A has frontal
    slices h_k * A_blur (A_blur is m x r, vertical blur) and B has B_blur^T (B_blur is
    n x s, horizontal blur) as its first frontal slice and zeros elsewhere, so that
    bcirc(B^ST kron_t A) is the full cross-channel blur.

    Args:
        image: Real array of shape r x s x 3.
        sigma: Width of the Gaussian blur.
        bandwidth: Largest |i - j| with a nonzero blur entry.
        h_matrix: Circulant cross-channel blur with unit row sums.
        m: Rows of the observation; defaults to r.
        n: Columns of the observation; defaults to s.
    """
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 3 or image.shape[2] != 3:
        raise ShapeError(f"Expected an h x w x 3 image, got {image.shape}.")
    r, s, _ = image.shape
    m = r if m is None else m
    n = s if n is None else n
    tube = channel_blur_tube(h_matrix)
    a_blur = gaussian_toeplitz(m, r, sigma, bandwidth)
    b_blur = gaussian_toeplitz(n, s, sigma, bandwidth)

    a = TubalMatrix(torch.from_numpy(a_blur[:, :, None] * tube[None, None, :]))
    b_data = np.zeros((s, n, 3))
    b_data[:, :, 0] = b_blur.T
    b = TubalMatrix(torch.from_numpy(b_data))
    x_star = TubalMatrix(torch.from_numpy(image))
    LOGGER.debug(
        "Deblur problem: image %dx%d, observation %dx%d, sigma %.3g, bandwidth %d.",
        r,
        s,
        m,
        n,
        sigma,
        bandwidth,
    )
    return Problem(a, b, t_product(t_product(a, x_star), b), x_star)


def observed_image(problem: Problem) -> np.ndarray:
    """The blurred observation C cropped to the image size, channels last."""
    r, s = problem.A.cols, problem.B.rows
    m, n = problem.C.rows, problem.C.cols
    top, left = (m - r) // 2, (n - s) // 2
    return problem.C.data[top : top + r, left : left + s].numpy()


def synthetic_image(height: int, width: int) -> np.ndarray:
    """Striped and graded test image in [0, 1] with distinct channels."""
    if min(height, width) < 1:
        raise ParameterError(f"Image size must be positive, got {height}x{width}.")
    rows = np.linspace(0.0, 1.0, height)[:, None]
    cols = np.linspace(0.0, 1.0, width)[None, :]
    stripes = (np.arange(width)[None, :] // max(width // 6, 1)) % 2
    bands = (np.arange(height)[:, None] // max(height // 4, 1)) % 2
    red = 0.2 + 0.6 * rows * np.ones_like(cols)
    green = 0.15 + 0.7 * stripes * np.ones_like(rows)
    blue = 0.1 + 0.4 * cols + 0.4 * bands
    return np.clip(np.stack([red, green, blue], axis=-1), 0.0, 1.0)


def expand_to_matrix_problem(
    problem: Problem, max_entries: int = MATRIX_BASELINE_MAX_ENTRIES
) -> Problem:
    """The block-circulant expansion bcirc(A) bcirc(X) bcirc(B) = bcirc(C) as tube length 1."""

    def expand(t: TubalMatrix) -> TubalMatrix:
        return TubalMatrix(bcirc_expand(t, max_entries=max_entries)[:, :, None])

    x_star = None if problem.X_star is None else expand(problem.X_star)
    return Problem(expand(problem.A), expand(problem.B), expand(problem.C), x_star)


def vectorize_problem(
    problem: Problem, max_entries: int = MATRIX_BASELINE_MAX_ENTRIES
) -> Problem:
    """(B^ST kron_t A) * vec_t(X) = vec_t(C) with a 1 x 1 identity right operand."""
    m, r, s, n, l = problem.dims
    check_budget(m * n, r * s * l, max_entries)
    kron = t_kron(t_transpose(problem.B, "ST"), problem.A)
    x_star = None if problem.X_star is None else vec_t(problem.X_star)
    return Problem(kron, identity(1, l), vec_t(problem.C), x_star)
