"""Tests for the tubal matrix algebra."""

from __future__ import annotations

import pytest
import torch

from tesp.algebra import (
    SpectralTubal,
    TubalMatrix,
    bcirc_expand,
    dft_cube,
    fold,
    from_frontal_slices,
    identity,
    idft_cube,
    random_normal,
    t_product,
    t_transpose,
    unfold,
)
from tesp.errors import DomainError, ParameterError, ShapeError


def test_t_product_matches_block_circulant_definition():
    generator = torch.Generator().manual_seed(0)
    for _ in range(200):
        m, n, p = torch.randint(1, 5, (3,), generator=generator).tolist()
        l = int(torch.randint(1, 6, (1,), generator=generator))
        a = random_normal(m, n, l, generator)
        b = random_normal(n, p, l, generator)
        expected = fold(bcirc_expand(a) @ unfold(b), l)
        torch.testing.assert_close(t_product(a, b).data, expected.data, rtol=0.0, atol=1e-10)


@pytest.mark.parametrize("tube_length", [1, 2, 3, 4, 5])
def test_identity_is_neutral(make_tubal, tube_length):
    a = make_tubal(3, 4, tube_length)
    torch.testing.assert_close(t_product(identity(3, tube_length), a).data, a.data)
    torch.testing.assert_close(t_product(a, identity(4, tube_length)).data, a.data)


@pytest.mark.parametrize("seed", range(5))
def test_transpose_reverses_products(make_tubal, seed):
    a = make_tubal(3, 2, 4, seed)
    b = make_tubal(2, 5, 4, seed + 100)
    lhs = t_transpose(t_product(a, b))
    rhs = t_product(t_transpose(b), t_transpose(a))
    torch.testing.assert_close(lhs.data, rhs.data, rtol=1e-12, atol=1e-12)


def test_transpose_modes(make_tubal):
    a = make_tubal(2, 3, 4)
    assert t_transpose(a).shape == (3, 2, 4)
    torch.testing.assert_close(t_transpose(a, "ST").frontal(1), a.frontal(1).T)
    torch.testing.assert_close(t_transpose(a, "R").frontal(1), a.frontal(3))
    torch.testing.assert_close(t_transpose(t_transpose(a)).data, a.data)
    with pytest.raises(ParameterError):
        t_transpose(a, "H")  # type: ignore[arg-type]


def test_dft_round_trip_and_conjugate_symmetry(make_tubal):
    a = make_tubal(3, 2, 5)
    spectrum = dft_cube(a)
    assert spectrum.tube_length == 5
    torch.testing.assert_close(spectrum[1], spectrum[4].conj())
    torch.testing.assert_close(idft_cube(spectrum).data, a.data, rtol=1e-12, atol=1e-12)


def test_spectrum_without_symmetry_is_rejected():
    generator = torch.Generator().manual_seed(0)
    slices = torch.randn(3, 2, 2, dtype=torch.complex128, generator=generator)
    with pytest.raises(DomainError):
        SpectralTubal(slices, origin_real=True)
    # Without the real-origin contract the inverse is complex and refused.
    with pytest.raises(DomainError):
        idft_cube(SpectralTubal(slices, origin_real=False))


def test_norm_and_arithmetic(make_tubal):
    a = make_tubal(3, 3, 2)
    b = make_tubal(3, 3, 2, seed=1)
    assert a.norm() == pytest.approx(float(a.data.square().sum().sqrt()))
    torch.testing.assert_close((a + b - b).data, a.data)
    torch.testing.assert_close((a * 2.0).data, 2.0 * a.data)
    torch.testing.assert_close((-a).data, -a.data)


def test_frontal_slices_and_slices_of_tubal_matrix():
    slices = [torch.full((2, 3), float(k)) for k in range(4)]
    a = from_frontal_slices(slices)
    assert a.shape == (2, 3, 4)
    assert a.horizontal_slice(1).shape == (1, 3, 4)
    assert a.lateral_slice(2).shape == (2, 1, 4)
    torch.testing.assert_close(a.frontal(3), slices[3].double())


def test_shape_and_finiteness_errors(make_tubal):
    with pytest.raises(ShapeError):
        t_product(make_tubal(2, 3, 2), make_tubal(2, 3, 2))
    with pytest.raises(ShapeError):
        t_product(make_tubal(2, 3, 2), make_tubal(3, 3, 4))
    bad = torch.zeros(2, 2, 2, dtype=torch.float64)
    bad[0, 0, 0] = float("nan")
    with pytest.raises(ParameterError):
        TubalMatrix(bad)
