"""Parties, channels and the message ledger.

Channels are modelled as ownership transfer of named registers: sending a
register moves it to the receiver and charges its width to the ledger. The
joint amplitude vector never changes on a send, so a distributed run can be
compared entry-by-entry against a monolithic simulation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .blockenc import qubits_for
from .errors import ContractError, TopologyViolationError

REFEREE = "referee"
ALICE = "alice"
BOB = "bob"

TOPOLOGY_KINDS = (
    "two_party_one_way_AtoB",
    "two_party_one_way_BtoA",
    "two_party_two_way",
    "smp",
    "coordinator",
)

CSV_COLUMNS = (
    "protocol",
    "topology",
    "n",
    "r",
    "kappa",
    "gamma",
    "qubits_sent",
    "bits_sent",
    "rounds",
    "success_prob",
    "fidelity",
    "tv_distance",
    "seed",
)


def party_name(i: int) -> str:
    return f"party{i}"


@dataclass(frozen=True)
class Topology:
    kind: str
    party_count: int = 2

    def __post_init__(self):
        if self.kind not in TOPOLOGY_KINDS:
            raise ContractError(f"unknown topology kind {self.kind!r}")
        if self.kind.startswith("two_party") and self.party_count != 2:
            raise ContractError("two-party topologies need exactly 2 parties")
        if self.kind in ("smp", "coordinator") and self.party_count < 2:
            raise ContractError(f"{self.kind} needs at least 2 parties")

    @property
    def parties(self) -> tuple[str, ...]:
        if self.kind.startswith("two_party"):
            return (ALICE, BOB)
        return tuple(party_name(i) for i in range(self.party_count))

    @property
    def entities(self) -> tuple[str, ...]:
        if self.kind in ("smp", "coordinator"):
            return self.parties + (REFEREE,)
        return self.parties

    def allows(self, sender: str, receiver: str) -> bool:
        if sender == receiver or sender not in self.entities or receiver not in self.entities:
            return False
        if self.kind == "two_party_one_way_AtoB":
            return (sender, receiver) == (ALICE, BOB)
        if self.kind == "two_party_one_way_BtoA":
            return (sender, receiver) == (BOB, ALICE)
        if self.kind == "two_party_two_way":
            return True
        if self.kind == "smp":
            return receiver == REFEREE
        return REFEREE in (sender, receiver)

    def check(self, sender: str, receiver: str) -> None:
        if not self.allows(sender, receiver):
            raise TopologyViolationError(f"{sender} -> {receiver} is not allowed in {self.kind}")


@dataclass(frozen=True)
class Message:
    sender: str
    receiver: str
    qubit_count: int
    bit_count: int
    round: int
    label: str = ""
    repeat: int = 1

    @property
    def qubits_total(self) -> int:
        return self.qubit_count * self.repeat

    @property
    def bits_total(self) -> int:
        return self.bit_count * self.repeat


@dataclass(frozen=True)
class LedgerTotals:
    qubits_sent: int
    bits_sent: int
    rounds: int
    messages: int


@dataclass
class MessageLedger:
    """Ordered message log; a new round starts whenever the speaker changes."""

    topology: Topology
    messages: list[Message] = field(default_factory=list)
    _round: int = field(default=0, repr=False)
    _last_speaker: str | None = field(default=None, repr=False)

    def record(self, sender: str, receiver: str, qubits: int = 0, bits: int = 0, label: str = "") -> Message:
        return self.record_block([(sender, receiver, qubits, bits)], 1, label)[0]

    def record_block(self, pattern, times: int = 1, label: str = "") -> list[Message]:
        """Record ``pattern`` (sender, receiver, qubits, bits) repeated ``times`` times.

        Each pattern entry becomes one :class:`Message` with ``repeat=times``
        whose ``round`` is the round of its first copy; the round counter
        advances exactly as if every copy had been logged separately.
        """
        times = int(times)
        if times < 1 or not pattern:
            raise ContractError("a message block needs at least one message and one repetition")
        entries = []
        for sender, receiver, qubits, bits in pattern:
            self.topology.check(sender, receiver)
            qubits, bits = int(qubits), int(bits)
            if qubits < 0 or bits < 0:
                raise ContractError("message sizes must be non-negative")
            if (qubits > 0) == (bits > 0):
                raise ContractError("a message carries either qubits or bits, and a nonzero amount of one")
            entries.append((sender, receiver, qubits, bits))
        speakers = [e[0] for e in entries]
        inner = sum(a != b for a, b in zip(speakers, speakers[1:]))
        wrap = int(speakers[0] != speakers[-1])
        first = 1 if self._last_speaker is None else self._round + (self._last_speaker != speakers[0])
        out = []
        rnd = first
        for k, (sender, receiver, qubits, bits) in enumerate(entries):
            if k:
                rnd += speakers[k] != speakers[k - 1]
            out.append(Message(sender, receiver, qubits, bits, rnd, label, times))
        self.messages.extend(out)
        self._round = first + inner * times + wrap * (times - 1)
        self._last_speaker = speakers[-1]
        return out

    @property
    def totals(self) -> LedgerTotals:
        return ledger_report(self)

    def between(self, sender: str, receiver: str) -> list[Message]:
        return [m for m in self.messages if m.sender == sender and m.receiver == receiver]


def ledger_report(ledger: MessageLedger) -> LedgerTotals:
    msgs = ledger.messages
    return LedgerTotals(
        qubits_sent=sum(m.qubits_total for m in msgs),
        bits_sent=sum(m.bits_total for m in msgs),
        rounds=ledger._round,
        messages=sum(m.repeat for m in msgs),
    )


@dataclass(frozen=True)
class Register:
    name: str
    dim: int
    owner: str

    @property
    def qubits(self) -> int:
        return qubits_for(self.dim)


class DistributedState:
    """Joint pure state over named registers, each owned by a party, the referee
    or in transit. Operations return new states; instances are never mutated."""

    def __init__(self, registers: Sequence[Register], amplitudes: np.ndarray):
        self.registers = tuple(registers)
        names = [r.name for r in self.registers]
        if len(set(names)) != len(names):
            raise ContractError("register names must be unique")
        amp = np.asarray(amplitudes, dtype=complex).reshape(-1)
        expected = int(np.prod([r.dim for r in self.registers])) if self.registers else 1
        if amp.size != expected:
            raise ContractError(f"amplitude length {amp.size} does not match register dims ({expected})")
        nrm = np.linalg.norm(amp)
        if abs(nrm - 1) > 1e-9:
            raise ContractError(f"state norm {nrm:.12f} is not 1")
        self.amplitudes = amp

    @classmethod
    def product(cls, parts: Iterable[tuple[str, np.ndarray, str]]) -> "DistributedState":
        regs, amp = [], np.ones(1, dtype=complex)
        for name, vec, owner in parts:
            v = np.asarray(vec, dtype=complex).reshape(-1)
            regs.append(Register(name, v.size, owner))
            amp = np.kron(amp, v)
        return cls(regs, amp)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.registers)

    def register(self, name: str) -> Register:
        for r in self.registers:
            if r.name == name:
                return r
        raise ContractError(f"no register named {name!r}")

    def owner_of(self, names: Sequence[str]) -> str:
        owners = {self.register(n).owner for n in names}
        if len(owners) != 1:
            raise ContractError(f"registers {list(names)} are split across {sorted(owners)}")
        return owners.pop()

    def qubits(self, names: Sequence[str]) -> int:
        return qubits_for(int(np.prod([self.register(n).dim for n in names])))

    def _axes(self, names: Sequence[str]) -> list[int]:
        return [self.names.index(n) for n in names]

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape([r.dim for r in self.registers])

    def apply(self, unitary: np.ndarray, names: Sequence[str]) -> "DistributedState":
        axes = self._axes(names)
        sub = int(np.prod([self.registers[a].dim for a in axes]))
        U = np.asarray(unitary)
        if U.shape != (sub, sub):
            raise ContractError(f"operator of shape {U.shape} does not act on registers {list(names)} (dim {sub})")
        t = np.moveaxis(self.tensor(), axes, range(len(axes)))
        shape = t.shape
        t = (U @ t.reshape(sub, -1)).reshape(shape)
        t = np.moveaxis(t, range(len(axes)), axes)
        return DistributedState(self.registers, t.reshape(-1))

    def with_owner(self, names: Sequence[str], owner: str) -> "DistributedState":
        regs = [Register(r.name, r.dim, owner) if r.name in names else r for r in self.registers]
        return DistributedState(regs, self.amplitudes)

    def add_register(self, name: str, vector: np.ndarray, owner: str) -> "DistributedState":
        v = np.asarray(vector, dtype=complex).reshape(-1)
        return DistributedState(self.registers + (Register(name, v.size, owner),), np.kron(self.amplitudes, v))

    def embed(self, name: str, new_dim: int) -> "DistributedState":
        """Zero-pad a register to a larger dimension (a local isometry)."""
        axis = self._axes([name])[0]
        old = self.registers[axis]
        if new_dim < old.dim:
            raise ContractError("embed can only enlarge a register")
        t = self.tensor()
        pad = [(0, 0)] * t.ndim
        pad[axis] = (0, new_dim - old.dim)
        t = np.pad(t, pad)
        regs = list(self.registers)
        regs[axis] = Register(old.name, new_dim, old.owner)
        return DistributedState(regs, t.reshape(-1))

    def probabilities(self, names: Sequence[str]) -> np.ndarray:
        axes = self._axes(names)
        p = np.abs(self.tensor()) ** 2
        other = tuple(i for i in range(p.ndim) if i not in axes)
        p = p.sum(axis=other)
        order = np.argsort(np.argsort(axes))
        return np.transpose(p, order).reshape(-1) if len(axes) > 1 else p.reshape(-1)

    def branch(self, name: str, value: int) -> tuple[float, np.ndarray]:
        """Probability of ``name == value`` and the unnormalised remaining amplitudes."""
        axis = self._axes([name])[0]
        sub = np.take(self.tensor(), value, axis=axis)
        vec = sub.reshape(-1)
        return float(np.vdot(vec, vec).real), vec


def send_registers(
    state: DistributedState, names: Sequence[str], to: str, ledger: MessageLedger, label: str = ""
) -> DistributedState:
    sender = state.owner_of(names)
    width = max(1, state.qubits(names))  # a trivial register still occupies one message slot
    ledger.record(sender, to, qubits=width, label=label or "+".join(names))
    return state.with_owner(names, to)


def send_classical(payload_bits: int, sender: str, receiver: str, ledger: MessageLedger, label: str = "") -> None:
    if payload_bits <= 0:
        raise ContractError("classical payload must be at least one bit")
    ledger.record(sender, receiver, bits=payload_bits, label=label)


def local_apply(state: DistributedState, party: str, unitary: np.ndarray, names: Sequence[str]) -> DistributedState:
    holder = state.owner_of(names)
    if holder != party:
        raise ContractError(f"{party} cannot act on registers held by {holder}")
    return state.apply(unitary, names)


def remote_apply(
    state: DistributedState,
    owner: str,
    unitary: np.ndarray,
    names: Sequence[str],
    ledger: MessageLedger,
    label: str = "",
) -> DistributedState:
    """Shuttle registers to ``owner``, apply its private unitary, shuttle back.

    Charges twice the register width.
    """
    holder = state.owner_of(names)
    state = send_registers(state, names, owner, ledger, label)
    state = local_apply(state, owner, unitary, names)
    return send_registers(state, names, holder, ledger, label)


def routed_apply(
    state: DistributedState,
    owner: str,
    unitary: np.ndarray,
    names: Sequence[str],
    width: int,
    ledger: MessageLedger,
    label: str = "",
) -> DistributedState:
    """Apply an operator that ``owner`` implements on a routed sub-register.

    The holder swaps a ``width``-qubit sub-register into the channel to
    ``owner`` (for example, conditioned on a selector it keeps), the owner
    acts, and the channel returns. Only the routed qubits are charged; the
    full-register ``unitary`` describes the combined effect.
    """
    holder = state.owner_of(names)
    ledger.record(holder, owner, qubits=max(1, width), label=label)
    state = state.apply(unitary, names)
    ledger.record(owner, holder, qubits=max(1, width), label=label)
    return state


def charge_trips(ledger: MessageLedger, trips, hub: str = REFEREE, label: str = "", times: int = 1) -> None:
    """Record the round trips of ``times`` encoding uses without touching any state."""
    if times < 1 or not trips:
        return
    pattern = []
    for owner, width in trips:
        pattern.append((hub, owner, max(1, width), 0))
        pattern.append((owner, hub, max(1, width), 0))
    ledger.record_block(pattern, times, label)


def shared_randomness(seed: int | None) -> np.random.Generator:
    """Common random stream visible to every party at no communication cost."""
    return np.random.default_rng(seed)


def bits_per_entry(m: int, n: int) -> int:
    """Bits used to write one real number: ceil(log2(m n)), at least 1."""
    return max(1, qubits_for(m * n))


def csv_row(
    protocol: str,
    ledger: MessageLedger,
    *,
    n: int,
    r: int,
    kappa: float,
    gamma: float,
    success_prob: float,
    fidelity: float,
    tv_distance: float,
    seed: int | None,
) -> dict:
    totals = ledger.totals
    return {
        "protocol": protocol,
        "topology": ledger.topology.kind,
        "n": n,
        "r": r,
        "kappa": kappa,
        "gamma": gamma,
        "qubits_sent": totals.qubits_sent,
        "bits_sent": totals.bits_sent,
        "rounds": totals.rounds,
        "success_prob": success_prob,
        "fidelity": fidelity,
        "tv_distance": tv_distance,
        "seed": "" if seed is None else seed,
    }
