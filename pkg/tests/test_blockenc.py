from __future__ import annotations

from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import seeds

from distqla.blockenc import (
    UseCost,
    encoded_identity,
    hermitian_dilation,
    stack_lcu,
    sum_lcu,
    unitary_dilation,
    verify_block_encoding,
)
from distqla.errors import ContractError, DegenerateInputError


def test_dilation_residual(rng):
    A = rng.standard_normal((5, 3))
    be = unitary_dilation(A)
    assert verify_block_encoding(be, A) <= 1e-10
    assert be.alpha == pytest.approx(np.linalg.norm(A, 2))


def test_identity_encoding_exact():
    assert verify_block_encoding(encoded_identity(4), np.eye(4)) == 0.0


@pytest.mark.parametrize("size", [1e-3, 1e-6])
def test_perturbation_is_measured(rng, size):
    A = rng.standard_normal((3, 3))
    be = unitary_dilation(A)
    E = np.zeros_like(be.unitary)
    E[0, 1] = size
    bad = replace(be, unitary=be.unitary + E)
    assert verify_block_encoding(bad, A) == pytest.approx(be.alpha * size, abs=1e-9)


def test_stack_three_four_five():
    encs = [unitary_dilation(np.array([[3.0]]), "party0"), unitary_dilation(np.array([[4.0]]), "party1")]
    st_ = stack_lcu(encs)
    assert st_.alpha == pytest.approx(5.0)
    assert np.allclose(st_.block().reshape(-1), [3 / 5, 4 / 5])


def test_stack_single_is_identity_operation(rng):
    be = unitary_dilation(rng.standard_normal((2, 2)))
    assert stack_lcu([be]) is be


@given(seeds, st.integers(2, 5), st.integers(1, 4))
def test_stack_random(seed, r, n):
    rng = np.random.default_rng(seed)
    blocks = [rng.standard_normal((3, n)) for _ in range(r)]
    encs = [unitary_dilation(B, f"party{i}") for i, B in enumerate(blocks)]
    st_ = stack_lcu(encs)
    assert verify_block_encoding(st_, np.vstack(blocks)) <= 1e-9
    assert st_.alpha == pytest.approx(np.sqrt(sum(np.linalg.norm(B, 2) ** 2 for B in blocks)))
    assert st_.use_cost.owners == tuple(f"party{i}" for i in range(r))


def test_sum_scalars():
    encs = [unitary_dilation(np.array([[1.0]])), unitary_dilation(np.array([[1.0]]))]
    s = sum_lcu(encs)
    assert s.alpha == 2.0
    assert s.block()[0, 0] == pytest.approx(1.0)


def test_sum_cancellation(rng):
    A = rng.standard_normal((3, 3))
    s = sum_lcu([unitary_dilation(A), unitary_dilation(-A)])
    assert verify_block_encoding(s, np.zeros((3, 3))) <= 1e-9


@given(seeds, st.integers(2, 4))
def test_sum_random_hermitian(seed, r):
    rng = np.random.default_rng(seed)
    terms = []
    for _ in range(r):
        X = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        terms.append(X + X.conj().T)
    s = sum_lcu([unitary_dilation(H) for H in terms])
    assert verify_block_encoding(s, sum(terms)) <= 1e-9
    assert s.alpha == pytest.approx(sum(np.linalg.norm(H, 2) for H in terms))


def test_hermitian_dilation_scalar():
    h = hermitian_dilation(unitary_dilation(np.array([[2.0]])))
    assert np.allclose(h.block(), np.array([[0, 1], [1, 0]]))
    assert h.alpha == 2.0


@given(seeds)
def test_hermitian_dilation_spectrum(seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((3, 3))
    A = A + A.T
    h = hermitian_dilation(unitary_dilation(A))
    ev = np.sort(np.linalg.eigvalsh(h.matrix()))
    sv = np.linalg.svd(A, compute_uv=False)
    assert np.allclose(ev, np.sort(np.concatenate([sv, -sv])))


def test_hermitian_dilation_residual_and_cost(rng):
    A = rng.standard_normal((4, 2))
    be = unitary_dilation(A)
    h = hermitian_dilation(be)
    target = np.block([[np.zeros((4, 4)), A], [A.T, np.zeros((2, 2))]])
    assert verify_block_encoding(h, target) <= 1e-9
    assert h.use_cost.qubits == be.use_cost.qubits + 2


def test_use_cost_scaling():
    c = UseCost((("party0", 3), ("party1", 3)))
    assert c.qubits == 12
    assert c.scaled(9).qubits == 9 * 12


def test_mismatched_columns_rejected(rng):
    a = unitary_dilation(rng.standard_normal((2, 2)))
    b = unitary_dilation(rng.standard_normal((4, 4)))
    with pytest.raises(ContractError):
        stack_lcu([a, b])


def test_zero_matrix_has_no_dilation():
    with pytest.raises(DegenerateInputError):
        unitary_dilation(np.zeros((2, 2)))


def test_verify_shape_mismatch(rng):
    with pytest.raises(ContractError):
        verify_block_encoding(unitary_dilation(rng.standard_normal((2, 2))), np.eye(3))
