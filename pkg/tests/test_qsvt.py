from __future__ import annotations

import numpy as np
import pytest
import scipy.linalg
import scipy.special
from hypothesis import given
from hypothesis import strategies as st

from distqla.blockenc import UseCost, unitary_dilation
from distqla.errors import ContractError, PhaseFindingError
from distqla.qsvt import (
    INVERSE_POLY_DEGREE_CONSTANT,
    ChebyshevPoly,
    PhaseSequence,
    chebyshev_grid,
    exact_poly_encoding,
    find_phases,
    inverse_poly,
    inverse_poly_certificate,
    jacobi_anger,
    qsp_sequence,
    qsvt_encoding,
    scalar_qsp,
)


def test_inverse_poly_half_half():
    p = inverse_poly(0.5, 0.5)
    x = np.linspace(0.5, 1, 2001)
    assert np.abs(p(x) - 0.375 / x).max() <= 0.5


@pytest.mark.parametrize("dp,eps", [(0.5, 0.1), (0.25, 1e-3), (0.1, 1e-2), (1 / 16, 1e-4)])
def test_inverse_poly_certificate(dp, eps):
    p = inverse_poly(dp, eps)
    err, sup = inverse_poly_certificate(p, dp)
    assert err <= eps and sup <= 1
    assert abs(p(dp) - 0.75) <= eps
    x = chebyshev_grid()
    assert np.allclose(p(-x), -p(x))
    assert p.degree <= INVERSE_POLY_DEGREE_CONSTANT / dp * np.log(1 / eps)


@pytest.mark.parametrize("dp,eps", [(0.0, 0.1), (0.6, 0.1), (0.25, 0.0), (0.25, 0.7)])
def test_inverse_poly_domain(dp, eps):
    with pytest.raises(ContractError):
        inverse_poly(dp, eps)


def test_jacobi_anger_zero_time():
    c, s = jacobi_anger(0.0, 1e-3)
    x = chebyshev_grid()
    assert np.allclose(c(x), 1) and np.allclose(s(x), 0)


def test_jacobi_anger_t1():
    c, s = jacobi_anger(1.0, 1e-6)
    x = np.linspace(-1, 1, 4001)
    assert np.abs(c(x) - np.cos(x)).max() <= 1e-6
    assert np.abs(s(x) - np.sin(x)).max() <= 1e-6


@given(st.floats(0.1, 20.0))
def test_jacobi_anger_coefficients(t):
    c, s = jacobi_anger(t, 1e-6)
    for k in range(1, (c.degree // 2) + 1):
        assert c.coefficients[2 * k] == pytest.approx(2 * (-1) ** k * scipy.special.jv(2 * k, t), abs=1e-14)
    x = chebyshev_grid()
    assert np.abs(s(x) - np.sin(t * x)).max() <= 1e-6


def test_jacobi_anger_rejects_large_eps():
    with pytest.raises(ContractError):
        jacobi_anger(1.0, 0.5)


def _scalar_block(x):
    s = np.sqrt(1 - x**2)
    return np.array([[x, s], [s, -x]])


def test_degree_one_qsp_is_identity_transform():
    x = 0.3
    U = _scalar_block(x)
    P = np.diag([1.0, 0.0])
    W = qsp_sequence(U, P, P, PhaseSequence(np.zeros(1), 1))
    assert W[0, 0] == pytest.approx(x)


def test_even_sequence_matches_direct_product():
    x = 0.4
    U = _scalar_block(x)
    P = np.diag([1.0, 0.0])
    phases = np.array([0.3, -0.7, 1.1, 0.2])
    W = qsp_sequence(U, P, P, PhaseSequence(phases, 4))
    R = 2 * P - np.eye(2)
    direct = np.eye(2, dtype=complex)
    for a, b in [(phases[0], phases[1]), (phases[2], phases[3])]:
        direct = direct @ scipy.linalg.expm(1j * a * R) @ U.T @ scipy.linalg.expm(1j * b * R) @ U
    assert np.allclose(W, direct)


def test_find_phases_T2():
    poly = ChebyshevPoly("even", [0.0, 0.0, 1.0])
    ph = find_phases(poly)
    x = np.array([0.0, 0.5, -0.5, 1.0, -1.0])
    assert np.abs(scalar_qsp(ph.phases, x) - (2 * x**2 - 1)).max() <= 1e-6
    for xv in x:
        W = qsp_sequence(_scalar_block(xv), np.diag([1.0, 0.0]), np.diag([1.0, 0.0]), ph)
        assert W[0, 0] == pytest.approx(2 * xv**2 - 1, abs=1e-6)


def test_find_phases_T1():
    ph = find_phases(ChebyshevPoly("odd", [0.0, 1.0]))
    x = np.linspace(-1, 1, 11)
    assert np.abs(scalar_qsp(ph.phases, x) - x).max() <= 1e-6


def test_find_phases_T3():
    ph = find_phases(ChebyshevPoly("odd", [0.0, 0.0, 0.0, 1.0]))
    x = np.cos(np.pi * (np.arange(64) + 0.5) / 64)
    assert np.abs(scalar_qsp(ph.phases, x) - (4 * x**3 - 3 * x)).max() <= 1e-6


def test_find_phases_inverse_poly_or_declared_failure():
    poly = inverse_poly(0.5, 0.1)
    try:
        ph = find_phases(poly)
    except PhaseFindingError as exc:
        assert exc.residual > 1e-6
    else:
        x = np.linspace(-1, 1, 101)
        assert np.abs(scalar_qsp(ph.phases, x) - poly(x)).max() <= 1e-5


def test_qsvt_encoding_matches_sv_transform(rng):
    A = rng.standard_normal((3, 3))
    be = unitary_dilation(A)
    poly = ChebyshevPoly("odd", [0.0, 0.0, 0.0, 1.0])
    enc = qsvt_encoding(be, poly)
    M = A / be.alpha
    assert np.abs(enc.block() - (4 * M @ M.T @ M - 3 * M)).max() <= 1e-5


def test_exact_linear_poly(rng):
    A = rng.standard_normal((4, 3))
    be = unitary_dilation(A)
    enc = exact_poly_encoding(be, ChebyshevPoly("odd", [0.0, 0.5]))
    assert np.abs(enc.block() - A / (2 * be.alpha)).max() <= 1e-9


def test_exact_inverse_poly_on_diag():
    A = np.diag([1.0, 0.5])
    be = unitary_dilation(A)
    eps = 1e-3
    poly = inverse_poly(0.5, eps).scaled(0.5)
    enc = exact_poly_encoding(be, poly)
    assert np.abs(enc.block() - 0.5 * 0.375 * np.linalg.inv(A)).max() <= eps


def test_exact_poly_cost_scales_with_degree():
    be = unitary_dilation(np.eye(2))
    be = type(be)(**{**be.__dict__, "use_cost": UseCost((("party0", 2), ("party1", 2)))})
    poly = ChebyshevPoly("odd", np.r_[np.zeros(9), 0.5])
    enc = exact_poly_encoding(be, poly)
    r, w = 2, 2
    assert enc.use_cost.qubits == 9 * 2 * r * w


def test_exact_poly_needs_half_bound():
    with pytest.raises(ContractError):
        exact_poly_encoding(unitary_dilation(np.eye(2)), ChebyshevPoly("odd", [0.0, 1.0]))


def test_polynomial_text_round_trip():
    p = inverse_poly(0.25, 1e-2)
    q = ChebyshevPoly.from_text(p.to_text())
    assert np.array_equal(p.coefficients, q.coefficients) and q.parity == "odd"


def test_parity_enforced():
    with pytest.raises(ContractError):
        ChebyshevPoly("odd", [1.0, 1.0])
