"""Tests for the t-Kronecker product, t-vectorization and projector identities."""

from __future__ import annotations

import functools

import pytest
import torch

from tesp.algebra import (
    WeightPair,
    fnorm_weighted,
    identity,
    t_kron,
    t_pinv,
    t_product,
    t_sqrt,
    t_transpose,
    unvec_t,
    vec_t,
)
from tesp.errors import ShapeError
from tesp.sketch import gaussian_sketch, sampling_sketch
from tesp.solver import Problem, tesp_step


def _assert_close(lhs, rhs, rtol=1e-8):
    assert (lhs - rhs).norm() <= rtol * max(rhs.norm(), 1.0)


@pytest.mark.parametrize("seed", range(50))
def test_kron_properties(make_tubal, seed):
    l = 1 + seed % 4
    a, b = make_tubal(2, 3, l, seed), make_tubal(3, 2, l, seed + 1)
    c, d = make_tubal(3, 2, l, seed + 2), make_tubal(2, 2, l, seed + 3)
    # Transpose distributes.
    _assert_close(t_transpose(t_kron(a, b)), t_kron(t_transpose(a), t_transpose(b)))
    # Mixed product.
    _assert_close(t_product(t_kron(a, b), t_kron(c, d)), t_kron(t_product(a, c), t_product(b, d)))
    # Pseudoinverse distributes.
    _assert_close(t_pinv(t_kron(a, b)), t_kron(t_pinv(a), t_pinv(b)))
    # Bilinearity.
    _assert_close(t_kron(a + a, b), t_kron(a, b) * 2.0)


@pytest.mark.parametrize("seed", range(50))
def test_vectorized_equation(make_tubal, seed):
    l = 1 + seed % 5
    a, x = make_tubal(4, 3, l, seed), make_tubal(3, 2, l, seed + 1)
    b = make_tubal(2, 5, l, seed + 2)
    lhs = vec_t(t_product(t_product(a, x), b))
    rhs = t_product(t_kron(t_transpose(b, "ST"), a), vec_t(x))
    _assert_close(lhs, rhs)


def test_vec_stacks_lateral_slices(make_tubal):
    x = make_tubal(3, 2, 2)
    v = vec_t(x)
    assert v.shape == (6, 1, 2)
    torch.testing.assert_close(v.data[3:, 0], x.data[:, 1])
    torch.testing.assert_close(unvec_t(v, 3).data, x.data, rtol=0.0, atol=0.0)
    with pytest.raises(ShapeError):
        unvec_t(v, 4)


def test_kron_tube_length_mismatch(make_tubal):
    with pytest.raises(ShapeError):
        t_kron(make_tubal(2, 2, 2), make_tubal(2, 2, 3))


@pytest.mark.parametrize("seed", range(50))
def test_pythagorean_identity(make_tubal, make_spd, seed):
    l = 1 + seed % 4
    a, x_star = make_tubal(5, 3, l, seed), make_tubal(3, 2, l, seed + 1)
    b = make_tubal(2, 4, l, seed + 2)
    problem = Problem(a, b, t_product(t_product(a, x_star), b), x_star)
    w = WeightPair(make_spd(3, l, seed + 3), make_spd(2, l, seed + 4))
    generator = torch.Generator().manual_seed(seed)
    s, v = gaussian_sketch(5, 2, l, generator), gaussian_sketch(4, 1, l, generator)
    x = make_tubal(3, 2, l, seed + 5)
    x_next = tesp_step(x, problem, s, v, w)
    before = fnorm_weighted(x - x_star, w) ** 2
    after = fnorm_weighted(x_next - x_star, w) ** 2
    moved = fnorm_weighted(x_next - x, w) ** 2
    assert after == pytest.approx(before - moved, rel=1e-8, abs=1e-8 * before)


def _projector(q):
    """Q*(Q^T*Q)^+*Q^T, the orthogonal projector onto the range of Q."""
    return t_product(t_product(q, t_pinv(t_product(t_transpose(q), q))), t_transpose(q))


def _chain(*factors):
    return functools.reduce(t_product, factors)


@pytest.mark.parametrize("seed", range(50))
def test_kron_norm_factorizes_per_slice(make_tubal, seed):
    l = 1 + seed % 4
    a, b = make_tubal(2, 3, l, seed), make_tubal(3, 2, l, seed + 1)
    a_energy = torch.fft.fft(a.data, dim=2).abs().square().sum(dim=(0, 1))
    b_energy = torch.fft.fft(b.data, dim=2).abs().square().sum(dim=(0, 1))
    expected = float((a_energy * b_energy).sum()) / l
    assert t_kron(a, b).norm() ** 2 == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("seed", range(50))
def test_kron_inverse(make_spd, seed):
    l = 1 + seed % 4
    a, b = make_spd(2, l, seed), make_spd(3, l, seed + 1)
    product = t_product(t_kron(a, b), t_kron(t_pinv(a), t_pinv(b)))
    _assert_close(product, identity(6, l))


@pytest.mark.parametrize("seed", range(50))
def test_kron_of_projectors_is_projector(make_tubal, seed):
    l = 1 + seed % 4
    p1 = _projector(make_tubal(4, 2, l, seed))
    p2 = _projector(make_tubal(3, 1, l, seed + 1))
    k = t_kron(p1, p2)
    _assert_close(t_product(k, k), k)
    _assert_close(t_transpose(k), k)


@pytest.mark.parametrize("seed", range(50))
def test_pythagorean_identity_for_projectors(make_tubal, seed):
    l = 1 + seed % 4
    a = make_tubal(4, 3, l, seed)
    p1 = _projector(make_tubal(4, 2, l, seed + 1))
    p2 = _projector(make_tubal(3, 2, l, seed + 2))
    projected = _chain(p1, a, p2)
    expected = a.norm() ** 2 - projected.norm() ** 2
    assert (a - projected).norm() ** 2 == pytest.approx(expected, rel=1e-8, abs=1e-10)


@pytest.mark.parametrize("seed", range(20))
def test_sketched_projectors_are_idempotent(make_tubal, make_spd, seed):
    l = 1 + seed % 3
    a, b = make_tubal(5, 3, l, seed), make_tubal(2, 4, l, seed + 1)
    m, n = make_spd(3, l, seed + 2), make_spd(2, l, seed + 3)
    generator = torch.Generator().manual_seed(seed)
    if seed % 2:
        s, v = gaussian_sketch(5, 2, l, generator), gaussian_sketch(4, 1, l, generator)
    else:
        s, v = sampling_sketch(5, 1, l, generator), sampling_sketch(4, 1, l, generator)
    s, v = s.tensor, v.tensor
    m_isqrt, n_isqrt = t_pinv(t_sqrt(m)), t_pinv(t_sqrt(n))
    g = _chain(s.T, a, m_isqrt)
    z = _chain(g.T, t_pinv(_chain(s.T, a, t_pinv(m), a.T, s)), g)
    k = _chain(n_isqrt, b, v)
    w = _chain(k, t_pinv(_chain(v.T, b.T, t_pinv(n), b, v)), k.T)
    _assert_close(t_product(z, z), z, rtol=1e-9)
    _assert_close(t_product(w, w), w, rtol=1e-9)
