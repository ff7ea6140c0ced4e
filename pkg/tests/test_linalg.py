from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from strategies import matrices, seeds

from distqla.errors import ContractError, DegenerateInputError
from distqla.linalg import (
    as_matrix,
    dilation_unitary,
    pseudoinverse,
    spectrum_stats,
    sv_function,
    svd,
    unitary_with_first_column,
)
from distqla.qsvt import ChebyshevPoly, inverse_poly


def test_svd_identity():
    assert np.allclose(svd(np.eye(2)).singular_values, [1, 1])


def test_svd_diagonal_with_zero():
    dec = svd(np.diag([3.0, 0.0]))
    assert np.allclose(dec.singular_values, [3, 0])
    assert dec.rank == 1


def test_svd_random_reconstruction(rng):
    A = rng.standard_normal((8, 5))
    assert np.linalg.norm(svd(A).reconstruct() - A) <= 1e-10


@given(matrices(max_dim=10))
def test_svd_properties(A):
    dec = svd(A)
    assert np.linalg.norm(dec.reconstruct() - A) <= 1e-10 * max(1, np.linalg.norm(A))
    assert np.all(np.diff(dec.singular_values) <= 0)
    assert np.allclose(dec.singular_values, np.linalg.svd(A, compute_uv=False))


def test_pseudoinverse_diagonal():
    assert np.allclose(pseudoinverse(np.diag([1.0, 0.5])), np.diag([1.0, 2.0]))


def test_pseudoinverse_zero_matrix():
    assert np.array_equal(pseudoinverse(np.zeros((3, 2))), np.zeros((2, 3)))


def test_pseudoinverse_rank_two_penrose(rng):
    A = rng.standard_normal((4, 2)) @ rng.standard_normal((2, 4))
    Ap = pseudoinverse(A)
    assert np.abs(A @ Ap @ A - A).max() <= 1e-9
    assert np.abs(Ap @ A @ Ap - Ap).max() <= 1e-9


@given(matrices(max_dim=9))
def test_pseudoinverse_matches_numpy(A):
    assert np.allclose(pseudoinverse(A), np.linalg.pinv(A), atol=1e-9)


def test_pseudoinverse_negative_tolerance():
    with pytest.raises(ContractError):
        pseudoinverse(np.eye(2), rank_tol=-1.0)


@pytest.mark.parametrize("bad", [np.array([[np.nan]]), np.zeros((0, 3)), np.array([[np.inf, 1.0]])])
def test_as_matrix_rejects(bad):
    with pytest.raises(ContractError):
        as_matrix(bad)


def test_dilation_diag_blocks():
    U = dilation_unitary(np.diag([1.0, 0.5]))
    assert np.allclose(U[:2, :2], np.diag([1.0, 0.5]))
    off = np.abs(U[:2, 2:])
    assert np.allclose(np.sort(np.diag(off)), np.sort([0.0, np.sqrt(3) / 2]))
    assert np.allclose(U.T @ U, np.eye(4))


def test_dilation_scalar():
    U = dilation_unitary(np.array([[1.0]]))
    assert U.shape == (2, 2) and U[0, 0] == 1.0


@given(matrices(max_dim=8))
def test_dilation_unitary_property(A):
    M = A / np.linalg.norm(A, 2)
    U = dilation_unitary(M)
    m, n = M.shape
    assert np.abs(U.conj().T @ U - np.eye(U.shape[0])).max() <= 1e-10
    assert np.abs(U[:m, :n] - M).max() <= 1e-10


def test_dilation_rejects_large_norm():
    with pytest.raises(ContractError):
        dilation_unitary(np.eye(2) * 2)


@given(seeds)
def test_unitary_with_first_column(seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    U = unitary_with_first_column(v)
    assert np.allclose(U[:, 0], v / np.linalg.norm(v))
    assert np.allclose(U.conj().T @ U, np.eye(5))


@given(matrices(max_dim=6))
def test_sv_function_identity_polynomial(A):
    f = ChebyshevPoly("odd", [0.0, 1.0], domain=None)
    assert np.abs(sv_function(A, f) - A).max() <= 1e-10 * max(1, np.abs(A).max())


def test_sv_function_square():
    f = ChebyshevPoly.from_power("even", [0.0, 0.0, 1.0])
    out = sv_function(np.diag([2.0, 3.0]), f)
    assert np.allclose(out, np.diag([4.0, 9.0]))


def test_sv_function_inverse_poly():
    delta, eps = 0.25, 1e-3
    A = np.diag([1.0, 0.6, 0.25])
    poly = inverse_poly(delta, eps)
    assert np.abs(sv_function(A, poly) - 0.75 * delta * np.linalg.pinv(A)).max() <= eps


def test_sv_function_needs_parity():
    with pytest.raises(ContractError):
        sv_function(np.eye(2), lambda x: x)


def test_spectrum_stats_identity():
    st = spectrum_stats(np.eye(3), np.array([0.6, 0.8, 0.0]))
    assert st.gamma == pytest.approx(1.0) and st.kappa == pytest.approx(1.0)


def test_spectrum_stats_projected_gamma():
    A = np.zeros((2, 2))
    A[0, 0] = 1.0
    st = spectrum_stats(A, np.array([1.0, 1.0]) / np.sqrt(2))
    assert st.gamma == pytest.approx(1 / np.sqrt(2))


def test_spectrum_stats_zero_b():
    with pytest.raises(DegenerateInputError):
        spectrum_stats(np.eye(2), np.zeros(2))
