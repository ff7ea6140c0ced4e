from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
import scipy.stats
from hypothesis import given
from hypothesis import strategies as st

from distqla.baselines import (
    SqAccess,
    classical_naive_regression,
    induced_distribution,
    sq_rank2_demo,
    sq_sample,
    tv_distance,
)
from distqla.errors import ContractError, DegenerateInputError
from distqla.instances import sq_counterexample


@pytest.mark.parametrize(
    "p,q,expected",
    [([0.5, 0.5], [0.5, 0.5], 0.0), ([1.0, 0.0], [0.0, 1.0], 1.0), ([0.6, 0.4], [0.5, 0.5], 0.1)],
)
def test_tv_examples(p, q, expected):
    assert tv_distance(p, q) == pytest.approx(expected)


def test_tv_rejects_negative():
    with pytest.raises(ContractError):
        tv_distance([1.5, -0.5], [0.5, 0.5])


@given(st.lists(st.floats(0, 1), min_size=2, max_size=6))
def test_tv_symmetric_and_bounded(w):
    w = np.asarray(w) + 1e-3
    p = w / w.sum()
    q = np.ones_like(p) / p.size
    d = tv_distance(p, q)
    assert d == pytest.approx(tv_distance(q, p))
    assert 0 <= d <= 1


def test_naive_b_to_a_bits():
    o = classical_naive_regression(np.eye(16), np.ones(16), "BtoA")
    assert o.ledger.totals.bits_sent == 16 * 8
    assert o.ledger.totals.qubits_sent == 0


@pytest.mark.parametrize("m,n", [(16, 16), (8, 4), (5, 3)])
def test_naive_a_to_b_bits(m, n, rng):
    o = classical_naive_regression(rng.standard_normal((m, n)), rng.standard_normal(m), "AtoB")
    assert o.ledger.totals.bits_sent == m * n * math.ceil(math.log2(m * n))


def test_naive_histogram_within_three_sigma(rng):
    A = np.diag([1.0, 0.5, 0.25, 2.0])
    b = rng.standard_normal(4)
    draws = 100_000
    o = classical_naive_regression(A, b, draws=draws, seed=11)
    p = o.exact_distribution
    counts = np.bincount(o.samples, minlength=4)
    sigma = np.sqrt(draws * p * (1 - p))
    assert np.all(np.abs(counts - draws * p) <= 3 * sigma + 1)
    assert o.tv_distance == 0.0


def test_naive_reproducible():
    a = classical_naive_regression(np.eye(3), np.ones(3), draws=50, seed=4)
    b = classical_naive_regression(np.eye(3), np.ones(3), draws=50, seed=4)
    assert np.array_equal(a.samples, b.samples)


def test_sq_unit_vector():
    h = SqAccess(np.eye(5)[3], seed=0)
    assert all(sq_sample(h) == 3 for _ in range(50))


def test_sq_uniform_chi_square():
    h = SqAccess(np.ones(4) / 2, seed=3)
    counts = np.bincount(h.sample_many(100_000), minlength=4)
    assert scipy.stats.chisquare(counts).pvalue > 1e-3


def test_sq_counters():
    h = SqAccess(np.array([[1.0, 2.0], [3.0, 0.0]]))
    h.query(0, 1)
    h.norm()
    h.row_norms()
    h.sample()
    h.sample_row(1)
    assert (h.entry_queries, h.norm_queries, h.samples) == (1, 2, 2)


def test_sq_row_norm_distribution():
    h = SqAccess(np.array([[3.0, 4.0], [0.0, 0.0], [0.0, 5.0]]))
    assert np.allclose(h.distribution(), [0.5, 0.0, 0.5])


def test_sq_zero_vector():
    with pytest.raises(DegenerateInputError):
        SqAccess(np.zeros(3))


def test_induced_distribution():
    assert np.allclose(induced_distribution([3.0, 4.0]), [0.36, 0.64])


def test_sq_demo_disjoint_point_mass():
    rep = sq_rank2_demo(sq_counterexample([1, 1, 0, 0], [0, 0, 1, 1]))
    assert rep.distribution[0] == pytest.approx(1.0)
    assert rep.verdict is False and rep.correct


@pytest.mark.parametrize("variant", [1, 2])
def test_sq_demo_one_common_index(variant):
    a = [1, 1, 0, 0, 0, 0, 0, 0]
    b = [0, 1, 1, 0, 0, 0, 0, 0]
    rep = sq_rank2_demo(sq_counterexample(a, b, variant))
    assert rep.verdict is True and rep.correct


@pytest.mark.parametrize("w", [2, 4, 8])
def test_sq_variant1_nonzero_mass_formula(w):
    """One common index: nonzero-index mass is n^2 / (n^2 + |a| |b|)."""
    n = 16
    a = np.zeros(n, dtype=int)
    b = np.zeros(n, dtype=int)
    a[:w] = 1
    b[w - 1 : 2 * w - 1] = 1
    rep = sq_rank2_demo(sq_counterexample(a, b, 1))
    assert rep.distribution[1:].sum() == pytest.approx(n**2 / (n**2 + w * w))


def test_sq_demo_exhaustive_small():
    n = 4
    strings = [s for s in itertools.product([0, 1], repeat=n) if any(s)]
    for a, b in itertools.product(strings, repeat=2):
        rep = sq_rank2_demo(sq_counterexample(a, b), seed=0)
        assert rep.correct


def test_sq_demo_needs_counterexample():
    from distqla.instances import permutation_index_instance

    with pytest.raises(ContractError):
        sq_rank2_demo(permutation_index_instance([0, 1], 0))
