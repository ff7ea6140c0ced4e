"""Step lists shared by the distributed executor and the monolithic reference.

A protocol is written once as a sequence of steps. :func:`run_distributed`
plays it on a :class:`DistributedState` and fills the message ledger;
:func:`run_monolithic` multiplies full-space matrices built by index
arithmetic, with no notion of ownership. Agreement of the two is the
monolithic-equivalence check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .comm import (
    DistributedState,
    MessageLedger,
    Register,
    charge_trips,
    local_apply,
    remote_apply,
    routed_apply,
    send_classical,
    send_registers,
)
from .errors import ContractError


@dataclass(frozen=True)
class Local:
    party: str
    unitary: np.ndarray
    names: tuple[str, ...]
    label: str = ""


@dataclass(frozen=True)
class Remote:
    """Ship registers to ``owner``, apply, ship back."""

    owner: str
    unitary: np.ndarray
    names: tuple[str, ...]
    label: str = ""


@dataclass(frozen=True)
class Routed:
    owner: str
    unitary: np.ndarray
    names: tuple[str, ...]
    width: int
    label: str = ""


@dataclass(frozen=True)
class Charged:
    """Holder-local unitary whose communication is charged from a trip list."""

    holder: str
    unitary: np.ndarray
    names: tuple[str, ...]
    trips: tuple[tuple[str, int], ...]
    label: str = ""


@dataclass(frozen=True)
class Send:
    names: tuple[str, ...]
    to: str
    label: str = ""


@dataclass(frozen=True)
class Classical:
    bits: int
    sender: str
    receiver: str
    label: str = ""


Step = Union[Local, Remote, Routed, Charged, Send, Classical]


def dagger(step: Step) -> Step:
    """Inverse of a unitary step (communication steps are returned unchanged)."""
    if isinstance(step, (Local, Remote, Routed, Charged)):
        from dataclasses import replace

        return replace(step, unitary=step.unitary.conj().T)
    return step


def inverse(steps: Sequence[Step]) -> list[Step]:
    return [dagger(s) for s in reversed(steps)]


def run_distributed(state: DistributedState, steps: Sequence[Step], ledger: MessageLedger) -> DistributedState:
    for s in steps:
        if isinstance(s, Local):
            state = local_apply(state, s.party, s.unitary, s.names)
        elif isinstance(s, Remote):
            state = remote_apply(state, s.owner, s.unitary, s.names, ledger, s.label)
        elif isinstance(s, Routed):
            state = routed_apply(state, s.owner, s.unitary, s.names, s.width, ledger, s.label)
        elif isinstance(s, Charged):
            state = local_apply(state, s.holder, s.unitary, s.names)
            charge_trips(ledger, s.trips, hub=s.holder, label=s.label)
        elif isinstance(s, Send):
            state = send_registers(state, s.names, s.to, ledger, s.label)
        elif isinstance(s, Classical):
            send_classical(s.bits, s.sender, s.receiver, ledger, s.label)
        else:
            raise ContractError(f"unknown step {s!r}")
    return state


def full_operator(registers: Sequence[Register], unitary: np.ndarray, names: Sequence[str]) -> np.ndarray:
    """Matrix of ``unitary`` on ``names`` tensored with identity elsewhere."""
    dims = [r.dim for r in registers]
    order = [r.name for r in registers]
    axes = [order.index(n) for n in names]
    rest = [i for i in range(len(dims)) if i not in axes]
    total = int(np.prod(dims))
    digits = np.array(np.unravel_index(np.arange(total), dims))
    sub = np.ravel_multi_index(digits[axes], [dims[a] for a in axes]) if axes else np.zeros(total, int)
    env = np.ravel_multi_index(digits[rest], [dims[a] for a in rest]) if rest else np.zeros(total, int)
    same_env = env[:, None] == env[None, :]
    U = np.asarray(unitary)
    return np.where(same_env, U[sub[:, None], sub[None, :]], 0)


def run_monolithic(registers: Sequence[Register], amplitudes: np.ndarray, steps: Sequence[Step]) -> np.ndarray:
    """Compose every unitary step in one address space; communication steps are no-ops."""
    vec = np.asarray(amplitudes, dtype=complex).copy()
    for s in steps:
        if isinstance(s, (Local, Remote, Routed, Charged)):
            vec = full_operator(registers, s.unitary, s.names) @ vec
    return vec
