from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from strategies import seeds

from distqla.errors import ContractError, DegenerateInputError
from distqla.instances import (
    Instance,
    all_subsets,
    appendixA_index_regression,
    disjointness_regression,
    evolve,
    fourier_coefficient_distribution,
    fourier_sampling_instance,
    gamma_regression,
    hadamard_hamiltonian_instance,
    hadamard_transform,
    index_pauli_instance,
    multiparty_regression,
    permutation_index_instance,
    permutation_matrix,
    random_hamiltonian,
    random_split_regression,
    random_sum_regression,
    recompute_metadata,
    scaled_disjointness_regression,
    solution_distribution,
    sq_counterexample,
)
from distqla.linalg import pseudoinverse, spectrum_stats


def _dist(inst):
    return np.asarray(inst.metadata["expected_distribution"])


# Disjointness family


def test_disjointness_hand_value():
    inst = disjointness_regression({0, 1}, {1, 2}, 4)
    assert _dist(inst)[1] == pytest.approx(0.64)
    assert inst.metadata["kappa"] == pytest.approx(2.0)


def test_disjointness_disjoint_spreads():
    inst = disjointness_regression({0, 1}, {2, 3}, 8)
    p = _dist(inst)
    assert p.max() <= 0.5


@pytest.mark.parametrize("l", [4, 9, 16])
def test_disjointness_kappa_is_sqrt_l(l):
    inst = disjointness_regression({0}, {1}, l)
    assert inst.metadata["kappa"] == pytest.approx(math.sqrt(l))


def test_disjointness_rejects_full_set():
    with pytest.raises(ContractError):
        disjointness_regression({0, 1, 2, 3}, {0}, 4)


def test_gamma_disjoint_point_mass():
    inst = gamma_regression({0, 1}, {2, 3}, 4)
    assert _dist(inst)[4] == pytest.approx(1.0)


def test_gamma_one_common_index():
    inst = gamma_regression({0, 1}, {1, 3}, 4)
    assert _dist(inst)[1] == pytest.approx(0.5)
    st_ = spectrum_stats(inst.A, inst.b)
    assert inst.metadata["gamma"] == pytest.approx(st_.gamma)
    assert st_.kappa == pytest.approx(1.0)


def test_gamma_rejects_large_intersection():
    with pytest.raises(ContractError):
        gamma_regression({0, 1}, {0, 1}, 4)


def test_scaled_disjointness_intersection_dominates():
    inst = scaled_disjointness_regression(range(0, 8), range(7, 15), 16)
    assert inst.metadata["intersection_mass"] >= 0.5


def test_scaled_disjointness_disjoint_ratio():
    inst = scaled_disjointness_regression(range(0, 8), range(8, 16), 16)
    ratio = inst.metadata["cost_ratio"]
    assert 8 / 4 <= ratio <= 8 * 4
    p = _dist(inst)
    assert p.max() <= 0.2


# Index and permutation


def test_permutation_identity_and_shift():
    assert _dist(permutation_index_instance([0, 1, 2, 3], 2))[2] == pytest.approx(1.0)
    shift = [1, 2, 3, 0]
    assert _dist(permutation_index_instance(shift, 1))[2] == pytest.approx(1.0)


def test_permutation_random_exhaustive(rng):
    perm = rng.permutation(6)
    for j in range(6):
        assert _dist(permutation_index_instance(perm, j))[perm[j]] == pytest.approx(1.0)


def test_permutation_invalid():
    with pytest.raises(ContractError):
        permutation_matrix([0, 0, 1])


def test_index_pauli_exhaustive():
    n = 4
    for x in itertools.product([0, 1], repeat=n):
        for j in range(n):
            p = _dist(index_pauli_instance(x, j))
            bit_index = 2 * j + (1 - x[j])
            assert p[bit_index] == pytest.approx(1.0)


def test_appendixA_verdicts_balanced():
    bits = np.array([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1]])
    for i, j in itertools.product(range(4), repeat=2):
        inst = appendixA_index_regression(bits, i, j)
        assert (inst.metadata["mass_at_i"] > 0.5) == bool(bits[i, j])
        assert not inst.metadata["density_warning"]
        assert inst.metadata["cost_ratio"] / 16 <= 4 and 16 / inst.metadata["cost_ratio"] <= 4


def test_appendixA_density_warning():
    bits = np.ones((4, 4), dtype=int)
    bits[0, 0] = 0
    inst = appendixA_index_regression(bits, 1, 1)
    assert inst.metadata["density_warning"]


# Fourier and Hadamard


def test_fourier_constant():
    inst = fourier_sampling_instance([1, 1], [1, 1])
    assert _dist(inst)[0] == pytest.approx(1.0)


def test_fourier_f_equals_g(rng):
    f = rng.choice([-1, 1], 8)
    assert _dist(fourier_sampling_instance(f, f))[0] == pytest.approx(1.0)


def test_fourier_random_matches_brute_force(rng):
    f, g = rng.choice([-1, 1], 8), rng.choice([-1, 1], 8)
    inst = fourier_sampling_instance(f, g)
    assert np.allclose(_dist(inst), fourier_coefficient_distribution(f, g))


def test_fourier_bad_length():
    with pytest.raises(ContractError):
        fourier_sampling_instance([1, 1, 1], [1, 1, 1])


def test_hadamard_exponential_identity():
    H2 = hadamard_transform(1)
    U = scipy.linalg.expm(1j * (np.pi / 2) * (np.eye(2) - H2))
    phase = U[0, 0] / H2[0, 0]
    assert abs(phase) == pytest.approx(1.0)
    assert np.allclose(U, phase * H2)


def test_hadamard_hamiltonian_small():
    inst = hadamard_hamiltonian_instance([1, 1], [1, 1])
    out = evolve(inst.matrices, inst.b, 1.0)
    assert np.allclose(np.abs(out) ** 2, [1.0, 0.0])


def test_hadamard_hamiltonian_random(rng):
    f, g = rng.choice([-1, 1], 4), rng.choice([-1, 1], 4)
    inst = hadamard_hamiltonian_instance(f, g)
    out = evolve(inst.matrices, inst.b, 1.0)
    assert np.allclose(np.abs(out) ** 2, fourier_coefficient_distribution(f, g))


# Multiparty and rank-2


def test_multiparty_common_index():
    inst = multiparty_regression([{0, 1, 2}, {2, 5}], 16)
    assert inst.metadata["intersection_mass"] >= 1 / 3
    assert 0.5 <= inst.metadata["kappa"] / 4 <= 2


def test_multiparty_disjoint_spreads():
    inst = multiparty_regression([set(range(0, 16)), set(range(16, 32))], 64)
    assert inst.metadata["max_mass"] <= 0.1


def test_multiparty_too_many_parties():
    with pytest.raises(ContractError):
        multiparty_regression([{0}] * 5, 16)


def test_sq_variant1_disjoint():
    inst = sq_counterexample([1, 1, 0, 0], [0, 0, 1, 1], 1)
    x = pseudoinverse(inst.A) @ inst.b
    assert np.allclose(x / np.linalg.norm(x), [1, 0, 0, 0, 0])


def test_sq_variant2_metadata():
    n = 16
    a = np.zeros(n, dtype=int)
    b = np.zeros(n, dtype=int)
    a[:8] = 1
    b[8:] = 1
    inst = sq_counterexample(a, b, 2)
    assert inst.metadata["frob_times_pinv_norm"] == pytest.approx(math.sqrt(2))
    assert 0.5 <= inst.metadata["gamma"] * n <= 2


def test_sq_zero_weight():
    with pytest.raises(DegenerateInputError):
        sq_counterexample([0, 0], [1, 0])


# Random families and metadata


@given(seeds)
@settings(max_examples=10)
def test_metadata_recomputes(seed):
    for inst in (
        random_split_regression(8, 2, 4.0, seed),
        random_sum_regression(4, 2, 3.0, seed),
        disjointness_regression({0, 2}, {2, 3}, 6),
    ):
        again = recompute_metadata(inst)
        for key in ("kappa", "gamma"):
            assert again[key] == pytest.approx(inst.metadata[key], abs=1e-8)
        assert np.allclose(again["expected_distribution"], inst.metadata["expected_distribution"], atol=1e-8)


def test_random_split_kappa():
    inst = random_split_regression(8, 4, 5.0, seed=1)
    assert inst.r == 4 and inst.A.shape == (8, 8)
    assert inst.metadata["kappa"] == pytest.approx(5.0)


def test_random_hamiltonian_norm():
    inst = random_hamiltonian(8, 2, 2.0, seed=0, total_norm=2.0)
    assert inst.hamiltonian
    assert np.linalg.norm(sum(inst.matrices), 2) <= 2.0 + 1e-9


def test_solution_distribution_matches_pinv(rng):
    A = rng.standard_normal((5, 3))
    b = rng.standard_normal(5)
    x = np.linalg.pinv(A) @ b
    assert np.allclose(solution_distribution(A, b), np.abs(x) ** 2 / np.sum(np.abs(x) ** 2))


@pytest.mark.parametrize(
    "make",
    [
        lambda: disjointness_regression({0, 1}, {1, 2}, 4),
        lambda: random_split_regression(8, 2, 3.0, seed=2),
        lambda: random_hamiltonian(4, 2, 1.0, seed=3),
        lambda: fourier_sampling_instance([1, -1, 1, 1], [1, 1, -1, 1]),
        lambda: sq_counterexample([1, 0, 1], [0, 1, 1], 2),
    ],
)
def test_json_round_trip(make):
    inst = make()
    again = Instance.from_json(inst.to_json())
    assert inst.same_as(again)
    assert again.to_json() == inst.to_json()


def test_json_missing_field():
    with pytest.raises(ContractError):
        Instance.from_json('{"kind": "x"}')


def test_all_subsets_count():
    assert len(all_subsets(4)) == 14
