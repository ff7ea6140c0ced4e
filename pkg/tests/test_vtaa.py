from __future__ import annotations

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from strategies import seeds

from distqla.errors import ContractError
from distqla.protocols import coordinator_regression
from distqla.vtaa import (
    VtaaConfig,
    fit_exponent,
    gapped_phase_estimation,
    gpe_certificate,
    gpe_parameters,
    truncated_inverse,
    vtaa_solve,
)


def _diag_unitary(lams):
    return np.diag(np.exp(1j * np.asarray(lams, dtype=float)))


def _random_unitary_with_phases(lams, rng):
    Q, _ = np.linalg.qr(rng.standard_normal((len(lams), len(lams))) + 1j * rng.standard_normal((len(lams), len(lams))))
    return Q @ np.diag(np.exp(1j * np.asarray(lams))) @ Q.conj().T, Q


# Gapped phase estimation


def test_gpe_zero_phase_not_flagged():
    eps = 1e-3
    res = gapped_phase_estimation(_diag_unitary([0.0]), 0.25, eps, state=[1.0])
    assert res.flag_amplitudes[0, 1] <= eps
    assert res.flag1_prob <= eps**2


def test_gpe_unit_phase_flagged():
    eps = 1e-3
    res = gapped_phase_estimation(_diag_unitary([1.0]), 0.25, eps, state=[1.0])
    assert res.flag_amplitudes[0, 0] <= eps
    assert res.flag1_prob >= 1 - eps**2


def test_gpe_superposition_marginals(rng):
    eps = 1e-3
    lams = [0.05, 0.9, -0.7, -0.1]
    U, Q = _random_unitary_with_phases(lams, rng)
    psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    psi /= np.linalg.norm(psi)
    res = gapped_phase_estimation(U, 0.25, eps, state=psi)
    weights = np.abs(Q.conj().T @ psi) ** 2
    far = weights[[1, 2]].sum()
    assert abs(res.flag1_prob - far) <= 2 * eps


@pytest.mark.parametrize("phi,eps", [(0.25, 1e-2), (0.125, 1e-3), (1 / 16, 1e-3)])
def test_gpe_certificate_holds_on_grid(phi, eps):
    params = gpe_parameters(phi, eps)
    assert gpe_certificate(params) <= eps
    assert params.ancillas == params.t + 1


def test_gpe_branches_are_clean(rng):
    """Flag-0 branch of near eigenvectors leaves data and clock unentangled in the start state."""
    U = _diag_unitary([0.01, 0.02])
    psi = np.array([0.6, 0.8])
    res = gapped_phase_estimation(U, 0.25, 1e-3, state=psi)
    expected = np.outer(psi, res.params.window())
    assert np.linalg.norm(res.branches[0] - expected) <= 2e-3
    assert np.linalg.norm(res.branches[1]) <= 2e-3


def test_gpe_rejects_bad_phi():
    with pytest.raises(ContractError):
        gapped_phase_estimation(np.eye(2), 0.3, 1e-3)


def test_gpe_rejects_large_phases():
    with pytest.raises(ContractError):
        gapped_phase_estimation(_diag_unitary([2.0]), 0.25, 1e-3)


# Truncated inverse


def test_truncated_inverse_identity():
    psi = np.array([0.6, 0.8])
    out = truncated_inverse(np.eye(2), 1.0, 1e-3, state=psi)
    assert np.allclose(out.branch, out.scale * psi, atol=1e-3 * out.scale)


def test_truncated_inverse_diag_second_basis_vector():
    eps = 1e-3
    out = truncated_inverse(np.diag([1.0, 0.5]), 0.5, eps, state=[0.0, 1.0])
    assert out.residual <= eps
    assert np.allclose(out.branch / out.scale, [0.0, 2.0], atol=eps)


def test_truncated_inverse_tightening():
    A = np.diag([1.0, 0.6, 0.5])
    psi = np.ones(3) / np.sqrt(3)
    loose = truncated_inverse(A, 0.5, 1e-2, state=psi)
    tight = truncated_inverse(A, 0.5, 1e-4, state=psi)
    assert tight.residual <= 1e-4 and loose.residual <= 1e-2
    assert tight.residual <= loose.residual / 2 or tight.residual <= 1e-12


def test_truncated_inverse_warns_below_threshold():
    with pytest.warns(UserWarning):
        truncated_inverse(np.diag([1.0, 0.1]), 0.5, 1e-3, state=[0.0, 1.0])


def test_truncated_inverse_rejects_non_hermitian():
    with pytest.raises(ContractError):
        truncated_inverse(np.array([[0.0, 1.0], [0.0, 0.0]]), 0.5, 1e-3)


# Staged solver


def test_config_single_stage_at_kappa_one():
    assert VtaaConfig(1.0, 1e-3).T == 1
    assert VtaaConfig(8.0, 1e-3).T == 4


def test_vtaa_identity(rng):
    b = rng.standard_normal(4)
    o = vtaa_solve(np.eye(4), b, eps=1e-3)
    assert o.details["T"] == 1
    assert o.fidelity_to_target == pytest.approx(1.0, abs=1e-9)


def test_vtaa_three_level_spectrum(rng):
    eps = 1e-3
    b = rng.standard_normal(3)
    o = vtaa_solve(np.diag([1.0, 0.5, 0.25]), b, eps=eps)
    assert o.fidelity_to_target >= 1 - eps
    assert o.details["purity"] >= 1 - eps


@given(seeds)
@settings(max_examples=5)
def test_vtaa_matches_coordinator(seed):
    rng = np.random.default_rng(seed)
    eps = 1e-3
    A = np.diag(rng.uniform(0.25, 1.0, 4))
    b = rng.standard_normal(4)
    v = vtaa_solve(A, b, eps=eps)
    c = coordinator_regression([A[:2], A[2:]], [b[:2], b[2:]], eps=eps)
    overlap = abs(np.vdot(c.output_state, v.output_state)) ** 2
    assert overlap >= 1 - 2 * eps


def test_vtaa_registers_agree_with_eigen_reference():
    o = vtaa_solve(np.diag([1.0, 0.5]), np.array([1.0, 1.0]), eps=0.3, simulate="registers")
    assert o.monolithic_gap <= 1e-8


def test_vtaa_general_matrix(rng):
    A = rng.standard_normal((4, 3))
    A = A / np.linalg.norm(A, 2)
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] < 0.2:
        A = A + 0.3 * np.vstack([np.eye(3), np.zeros((1, 3))])
    b = rng.standard_normal(4)
    o = vtaa_solve(A, b, eps=1e-2, simulate="eigen")
    assert o.fidelity_to_target >= 1 - 1e-2


def test_vtaa_cost_grows_slower_than_coordinator():
    kappas = [2.0, 4.0, 8.0]
    v, c = [], []
    for k in kappas:
        A = np.diag(np.geomspace(1.0, 1 / k, 8))
        b = np.zeros(8)
        b[0] = 1.0
        v.append(vtaa_solve(A, b, eps=1e-3, simulate="eigen").ledger.totals.qubits_sent)
        c.append(coordinator_regression([A[:4], A[4:]], [b[:4], b[4:]], eps=1e-3).ledger.totals.qubits_sent)
    assert fit_exponent(kappas, v) <= 1.5
    assert fit_exponent(kappas, c) >= 1.7


def test_fit_exponent_exact():
    xs = [1.0, 2.0, 4.0, 8.0]
    assert fit_exponent(xs, [3 * x**2 for x in xs]) == pytest.approx(2.0)


def test_vtaa_bad_mode():
    with pytest.raises(ContractError):
        vtaa_solve(np.eye(2), np.ones(2), simulate="magic")


def test_hsim_exact_exponential_is_unitary(rng):
    X = rng.standard_normal((3, 3))
    H = (X + X.T) / np.linalg.norm(X + X.T, 2)
    U = scipy.linalg.expm(1j * H)
    res = gapped_phase_estimation(U, 0.25, 1e-2)
    assert np.allclose(np.sort(res.eigenphases), np.sort(np.linalg.eigvalsh(H)))
