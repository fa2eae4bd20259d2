"""Contains convergence factors of finite sketch sets.

For sketch pair (i, j) the expected projectors are

    Z_i = M^-1/2 * A^T * E_i * A * M^-1/2,    W_j = N^-1/2 * B * G_j * B^T * N^-1/2,

and delta_p^2 = lambda_min(E[bcirc(W_j kron_t Z_i)]). The max-over-pairs constant
delta_inf^2 has no closed form; it is bracketed by mirror ascent on the simplex of
pair weights (dual lower bound, reported) and the best unit vector found on the way
(primal upper value). Expectations are exact finite sums.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from typing import Sequence

import torch

from tesp.algebra import WeightPair, bcirc_expand, t_kron
from tesp.algebra.bcirc import check_budget
from tesp.algebra.tubal import conjugate_fill, from_half
from tesp.errors import DomainError
from tesp.sketch import SketchSet
from tesp.solver import Problem
from tesp.solver.factors import SpectralProblem, build_factors
from tesp.utils import linalg

LOGGER = logging.getLogger(__name__)

# Largest r * s * l for the explicit block-circulant eigenproblem.
MAX_KRON_SIZE = 2000
DELTA_INF_TOL = 1e-6
DELTA_INF_MAX_ITERS = 500


@dataclasses.dataclass(frozen=True)
class ConvergenceReport:
    """Convergence factors of one (left set, right set, weights) configuration."""

    # 1 - delta_p^2, the nonadaptive factor.
    rho: float
    delta_p_sq: float
    delta_inf_sq: float
    # (lambda_min(E[Z_hat_k]), lambda_min(E[W_hat_k])) for k = 0..l-1, shape (l, 2).
    per_slice_lambdas: torch.Tensor
    # 1 - min_k lambda_min(E[Z_hat_k]) lambda_min(E[W_hat_k]).
    rho_fourier: float
    rho_md: float
    rho_cs: float
    theta: float
    # delta^2 with uniform probabilities on both sets.
    delta_uniform_sq: float
    # Max-over-pairs Rayleigh quotient of the best vector found (>= true delta_inf^2).
    delta_inf_upper: float
    approximate: bool
    q_s: int
    q_v: int


def _projector_spectra(
    problem: Problem, left: SketchSet, right: SketchSet, w: WeightPair
) -> tuple[SpectralProblem, torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]:
    """Half spectra of all Z_i (q_S, h, r, r) and W_j (q_V, h, s, s) plus range factors."""
    sp = SpectralProblem.build(problem, w)
    factors = build_factors(sp, left, right)
    m_isqrt = linalg.hermitian_power(w.M.half_spectrum(), -0.5)
    n_isqrt = linalg.hermitian_power(w.N.half_spectrum(), -0.5)
    left_range = m_isqrt @ sp.a_hat.mH
    right_range = n_isqrt @ sp.b_hat
    g = factors.p @ sp.a_hat @ m_isqrt
    z = torch.stack(
        [
            g[:, block.start : block.stop].mH @ g[:, block.start : block.stop]
            for block in map(factors.left_block, range(left.size))
        ]
    )
    k = right_range @ factors.q
    w_stack = torch.stack(
        [
            k[:, :, block.start : block.stop] @ k[:, :, block.start : block.stop].mH
            for block in map(factors.right_block, range(right.size))
        ]
    )
    return sp, z, w_stack, left_range, right_range


def _expected(stack: torch.Tensor, probs: torch.Tensor) -> torch.Tensor:
    return torch.einsum("i,i...->...", probs.to(stack.dtype), stack)


def _min_eig(matrices: torch.Tensor) -> torch.Tensor:
    return torch.linalg.eigvalsh(linalg.hermitian_part(matrices))[..., 0]


def _fourier_delta(ez_half: torch.Tensor, ew_half: torch.Tensor) -> float:
    return float((_min_eig(ez_half) * _min_eig(ew_half)).min())


class _RestrictedSlices:
    """Z_i, conj(W_j) of every half-spectrum slice restricted to the range of the iteration."""

    def __init__(
        self,
        z: torch.Tensor,
        w_stack: torch.Tensor,
        left_range: torch.Tensor,
        right_range: torch.Tensor,
    ):
        self.z_slices: list[torch.Tensor] = []
        self.w_slices: list[torch.Tensor] = []
        for k in range(z.shape[1]):
            basis_a = linalg.orthonormal_range(left_range[k])
            # B^C is read as B^R, i.e. conjugated Fourier slices.
            basis_b = linalg.orthonormal_range(right_range[k].conj())
            if basis_a.shape[1] == 0 or basis_b.shape[1] == 0:
                continue
            self.z_slices.append(basis_a.mH @ z[:, k] @ basis_a)
            self.w_slices.append(basis_b.mH @ w_stack[:, k].conj() @ basis_b)

    def lambda_min(self, weights: torch.Tensor) -> tuple[float, torch.Tensor, int]:
        """Smallest eigenvalue of sum_ij weights_ij conj(W_j) kron Z_i, its vector and slice."""
        best = (math.inf, torch.empty(0), -1)
        for k, (z, w) in enumerate(zip(self.z_slices, self.w_slices)):
            mixed = torch.einsum("ij,jab->iab", weights.to(w.dtype), w)
            rb, ra = w.shape[-1], z.shape[-1]
            kron = torch.einsum("iab,icd->acbd", mixed, z).reshape(rb * ra, rb * ra)
            eigvals, eigvecs = torch.linalg.eigh(linalg.hermitian_part(kron))
            if float(eigvals[0]) < best[0]:
                best = (float(eigvals[0]), eigvecs[:, 0], k)
        return best

    def quotients(self, vector: torch.Tensor, k: int) -> torch.Tensor:
        """u^H (conj(W_j) kron Z_i) u for every pair, shape (q_S, q_V)."""
        z, w = self.z_slices[k], self.w_slices[k]
        u = vector.reshape(w.shape[-1], z.shape[-1])
        return torch.einsum("ac,jab,icd,bd->ij", u.conj(), w, z, u).real


def _delta_inf(
    restricted: _RestrictedSlices,
    start: torch.Tensor,
    tol: float,
    max_iters: int,
) -> tuple[float, float]:
    """Bracket min_u max_ij u^H K_ij u by mirror ascent over pair weights."""
    if not restricted.z_slices:
        return 0.0, 0.0
    weights = start.clone()
    lower, vector, k = restricted.lambda_min(weights)
    upper = float(restricted.quotients(vector, k).max())
    for step in range(max_iters):
        if upper - lower <= tol:
            break
        gains = restricted.quotients(vector, k)
        weights = weights * torch.exp((4.0 / math.sqrt(step + 1.0)) * (gains - gains.max()))
        weights = weights / weights.sum()
        value, vector, k = restricted.lambda_min(weights)
        upper = min(upper, float(restricted.quotients(vector, k).max()))
        if value > lower:
            lower = value
    else:
        if upper - lower > tol:
            LOGGER.warning(
                "delta_inf^2 iteration stopped at the cap with gap %.3e.", upper - lower
            )
    return lower, upper


def expected_projector_spectrum(
    problem: Problem,
    left: SketchSet,
    right: SketchSet,
    w: WeightPair,
    theta: float = 0.5,
    tol: float = DELTA_INF_TOL,
    max_iters: int = DELTA_INF_MAX_ITERS,
) -> ConvergenceReport:
    """Convergence factors of the nonadaptive and adaptive rules for finite sets.

    Args:
        problem: The equation; only A and B are used.
        left: Left sketch set.
        right: Right sketch set.
        w: Definite weights M and N.
        theta: Parameter of the capped sampling rule.
        tol: Target gap between the delta_inf^2 bounds.
        max_iters: Iteration cap of the delta_inf^2 ascent.

    Returns:
        The report; delta_inf_sq is a certified lower bound and flagged approximate.
    """
    if w.semidefinite:
        raise DomainError("Convergence factors are reported for definite weights only.")
    _, r, s, _, l = problem.dims
    size = r * s * l
    check_budget(size, size, MAX_KRON_SIZE**2)

    _, z, w_stack, left_range, right_range = _projector_spectra(problem, left, right, w)
    ez_half = _expected(z, left.probs)
    ew_half = _expected(w_stack, right.probs)

    kron = t_kron(from_half(ew_half, l), from_half(ez_half, l))
    expanded = bcirc_expand(kron, max_entries=MAX_KRON_SIZE**2)
    delta_p_sq = float(torch.linalg.eigvalsh(0.5 * (expanded + expanded.T))[0])

    full_z = conjugate_fill(ez_half, l)
    full_w = conjugate_fill(ew_half, l)
    per_slice = torch.stack([_min_eig(full_z), _min_eig(full_w)], dim=-1)
    rho_fourier = 1.0 - float((per_slice[:, 0] * per_slice[:, 1]).min())

    uniform_left = torch.full((left.size,), 1.0 / left.size, dtype=torch.float64)
    uniform_right = torch.full((right.size,), 1.0 / right.size, dtype=torch.float64)
    delta_uniform_sq = _fourier_delta(
        _expected(z, uniform_left), _expected(w_stack, uniform_right)
    )

    restricted = _RestrictedSlices(z, w_stack, left_range, right_range)
    start = torch.outer(left.probs, right.probs)
    delta_inf_sq, delta_inf_upper = _delta_inf(restricted, start, tol, max_iters)
    delta_inf_sq = min(max(delta_inf_sq, delta_p_sq), 1.0)

    LOGGER.debug(
        "delta_p^2 = %.6e, delta_inf^2 in [%.6e, %.6e].", delta_p_sq, delta_inf_sq, delta_inf_upper
    )
    return ConvergenceReport(
        rho=min(max(1.0 - delta_p_sq, 0.0), 1.0),
        delta_p_sq=delta_p_sq,
        delta_inf_sq=delta_inf_sq,
        per_slice_lambdas=per_slice,
        rho_fourier=rho_fourier,
        rho_md=min(max(1.0 - delta_inf_sq, 0.0), 1.0),
        rho_cs=min(max(1.0 - theta * delta_inf_sq - (1.0 - theta) * delta_p_sq, 0.0), 1.0),
        theta=theta,
        delta_uniform_sq=delta_uniform_sq,
        delta_inf_upper=delta_inf_upper,
        approximate=True,
        q_s=left.size,
        q_v=right.size,
    )


def pr_step_factors(
    report: ConvergenceReport, loss_tables: Sequence[torch.Tensor], zero_rtol: float = 1e-10
) -> list[tuple[float, float]]:
    """Per-iteration factors of the adaptive-probabilities rule.

    For each loss table f^t returns (1 - (1 + q^2 Var_u[p^t]) delta_uu^2,
    1 - (1 + |Omega_t| / q) delta_uu^2), where q = q_S q_V, p^t = f^t / sum f^t and
    Omega_t holds the pairs whose loss vanishes.
    """
    factors = []
    pairs = report.q_s * report.q_v
    for table in loss_tables:
        flat = table.reshape(-1).to(torch.float64)
        total = float(flat.sum())
        if total <= 0.0:
            continue
        probs = flat / total
        variance = float(((probs - 1.0 / pairs) ** 2).mean())
        vanished = int((flat <= zero_rtol * float(flat.max())).sum())
        factors.append(
            (
                1.0 - (1.0 + pairs**2 * variance) * report.delta_uniform_sq,
                1.0 - (1.0 + vanished / pairs) * report.delta_uniform_sq,
            )
        )
    return factors
