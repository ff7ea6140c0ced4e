from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from distqla.comm import (
    ALICE,
    BOB,
    CSV_COLUMNS,
    REFEREE,
    DistributedState,
    MessageLedger,
    Topology,
    bits_per_entry,
    charge_trips,
    csv_row,
    ledger_report,
    local_apply,
    party_name,
    remote_apply,
    send_classical,
    send_registers,
)
from distqla.errors import ContractError, TopologyViolationError


def _basis(d, k=0):
    v = np.zeros(d)
    v[k] = 1.0
    return v


def test_send_one_qubit_two_way():
    ledger = MessageLedger(Topology("two_party_two_way"))
    state = DistributedState.product([("q", _basis(2), ALICE)])
    state = send_registers(state, ["q"], BOB, ledger)
    assert ledger.totals.qubits_sent == 1
    assert state.register("q").owner == BOB


def test_referee_cannot_send_in_smp():
    ledger = MessageLedger(Topology("smp", 2))
    state = DistributedState.product([("q", _basis(2), REFEREE)])
    with pytest.raises(TopologyViolationError):
        send_registers(state, ["q"], party_name(0), ledger)


def test_b_register_of_dimension_eight_costs_three_qubits():
    ledger = MessageLedger(Topology("two_party_one_way_BtoA"))
    state = DistributedState.product([("b", np.ones(8) / np.sqrt(8), BOB)])
    send_registers(state, ["b"], ALICE, ledger)
    assert ledger.totals.qubits_sent == 3


@pytest.mark.parametrize(
    "kind,sender,receiver,ok",
    [
        ("two_party_one_way_AtoB", ALICE, BOB, True),
        ("two_party_one_way_AtoB", BOB, ALICE, False),
        ("two_party_one_way_BtoA", BOB, ALICE, True),
        ("coordinator", REFEREE, "party1", True),
        ("coordinator", "party0", "party1", False),
        ("smp", "party0", REFEREE, True),
    ],
)
def test_topology_rules(kind, sender, receiver, ok):
    topo = Topology(kind, 2)
    assert topo.allows(sender, receiver) is ok


def test_classical_norm_message_bits():
    ledger = MessageLedger(Topology("coordinator", 2))
    c = 2
    send_classical(c * bits_per_entry(16, 16), "party0", REFEREE, ledger)
    assert ledger.totals.bits_sent == 8 * c


def test_classical_whole_vector():
    ledger = MessageLedger(Topology("two_party_one_way_BtoA"))
    send_classical(16 * bits_per_entry(16, 16), BOB, ALICE, ledger)
    assert ledger.totals.bits_sent == 16 * 8


def test_zero_payload_rejected():
    ledger = MessageLedger(Topology("two_party_two_way"))
    with pytest.raises(ContractError):
        send_classical(0, ALICE, BOB, ledger)


def test_remote_apply_round_trip_charges_twice():
    ledger = MessageLedger(Topology("coordinator", 2))
    state = DistributedState.product([("w", _basis(8), REFEREE)])
    X = np.roll(np.eye(8), 1, axis=0)
    state = remote_apply(state, "party0", X, ["w"], ledger)
    assert ledger.totals.qubits_sent == 6
    assert np.allclose(state.amplitudes, _basis(8, 1))
    assert state.register("w").owner == REFEREE


def test_remote_inverse_pair_restores_state(rng):
    ledger = MessageLedger(Topology("coordinator", 2))
    psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    psi /= np.linalg.norm(psi)
    Q, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    state = DistributedState.product([("w", psi, REFEREE)])
    state = remote_apply(state, "party0", Q, ["w"], ledger)
    state = remote_apply(state, "party0", Q.conj().T, ["w"], ledger)
    assert np.allclose(state.amplitudes, psi)
    assert ledger.totals.qubits_sent == 4 * 2


def test_controlled_lcu_step_matches_matrix_product(rng):
    ledger = MessageLedger(Topology("coordinator", 2))
    sel = np.array([0.6, 0.8])
    data = rng.standard_normal(2)
    data /= np.linalg.norm(data)
    U0 = np.array([[0.0, 1.0], [1.0, 0.0]])
    ctrl = np.block([[U0, np.zeros((2, 2))], [np.zeros((2, 2)), np.eye(2)]])
    state = DistributedState.product([("sel", sel, REFEREE), ("d", data, REFEREE)])
    out = remote_apply(state, "party0", ctrl, ["sel", "d"], ledger)
    assert np.allclose(out.amplitudes, ctrl @ np.kron(sel, data))


def test_local_apply_requires_ownership():
    state = DistributedState.product([("q", _basis(2), ALICE)])
    with pytest.raises(ContractError):
        local_apply(state, BOB, np.eye(2), ["q"])


def test_ledger_report_cases():
    ledger = MessageLedger(Topology("two_party_two_way"))
    assert ledger_report(ledger).qubits_sent == 0 and ledger_report(ledger).rounds == 0
    ledger.record(ALICE, BOB, qubits=3)
    ledger.record(BOB, ALICE, qubits=3)
    ledger.record(ALICE, BOB, bits=5)
    t = ledger_report(ledger)
    assert (t.qubits_sent, t.bits_sent, t.rounds, t.messages) == (6, 5, 3, 3)


def test_message_must_carry_one_kind():
    ledger = MessageLedger(Topology("two_party_two_way"))
    with pytest.raises(ContractError):
        ledger.record(ALICE, BOB, qubits=1, bits=1)
    with pytest.raises(ContractError):
        ledger.record(ALICE, BOB)


@given(
    st.lists(st.tuples(st.sampled_from(["party0", "party1"]), st.integers(1, 4)), min_size=1, max_size=4),
    st.integers(1, 6),
    st.booleans(),
)
def test_batched_block_equals_individual_records(trips, times, warm):
    """Batched charging must give the same totals and rounds as logging each copy."""
    topo = Topology("coordinator", 2)
    batched, single = MessageLedger(topo), MessageLedger(topo)
    if warm:
        for led in (batched, single):
            led.record("party0", REFEREE, bits=1)
    charge_trips(batched, trips, times=times)
    for _ in range(times):
        for owner, width in trips:
            single.record(REFEREE, owner, qubits=width)
            single.record(owner, REFEREE, qubits=width)
    assert batched.totals == single.totals


def test_state_norm_checked():
    with pytest.raises(ContractError):
        DistributedState.product([("q", np.array([1.0, 1.0]), ALICE)])


def test_branch_and_probabilities():
    psi = np.kron(np.array([0.6, 0.8]), np.array([1.0, 0.0]))
    state = DistributedState.product([("a", np.array([0.6, 0.8]), ALICE), ("b", np.array([1.0, 0.0]), ALICE)])
    assert np.allclose(state.amplitudes, psi)
    p, rest = state.branch("a", 1)
    assert p == pytest.approx(0.64) and np.allclose(rest, [0.8, 0.0])
    assert np.allclose(state.probabilities(["a"]), [0.36, 0.64])


def test_csv_row_schema():
    ledger = MessageLedger(Topology("two_party_two_way"))
    ledger.record(ALICE, BOB, qubits=2)
    row = csv_row(
        "x", ledger, n=2, r=1, kappa=1.0, gamma=1.0, success_prob=1.0, fidelity=1.0, tv_distance=0.0, seed=None
    )
    assert tuple(row) == CSV_COLUMNS
    assert row["qubits_sent"] == 2 and row["seed"] == ""


def test_unknown_topology():
    with pytest.raises(ContractError):
        Topology("mesh")
