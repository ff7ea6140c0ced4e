"""End-to-end protocols for regression state preparation and Hamiltonian simulation.

Every protocol returns a :class:`ProtocolOutcome` with the conditional output
state, the exact single-attempt success probability and a filled ledger.
Each protocol also records the final joint amplitudes of its distributed run
together with the same quantity from a monolithic composition, so the two can
be compared.

Amplitude amplification uses the known success probability to fix the
iteration count, and an extra referee-local ancilla rotation lowers the
amplitude to the exact angle so that the final success probability is 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import circuit as C
from .blockenc import PAD_ALPHA, BlockEncoding, UseCost, hermitian_dilation, qubits_for, stack_lcu, sum_lcu
from .comm import (
    ALICE,
    BOB,
    REFEREE,
    DistributedState,
    MessageLedger,
    Register,
    Topology,
    bits_per_entry,
    csv_row,
    local_apply,
    party_name,
    send_classical,
    send_registers,
)
from .errors import ContractError, DegenerateInputError
from .linalg import as_matrix, as_vector, dilation_unitary, normalize, pseudoinverse, spectrum_stats, svd, unitary_with_first_column
from .qsvt import exact_poly_encoding, inverse_poly, jacobi_anger

REPEAT_CONSTANT = 3
TINY = 1e-14
# Pre-amplification success of coordinator regression is at least
# COORD_SUCCESS_CONSTANT * delta^2 gamma^2 / |A|^2 (checked at run time).
COORD_SUCCESS_CONSTANT = 0.1


@dataclass
class ProtocolOutcome:
    protocol: str
    output_distribution: np.ndarray
    success_prob: float
    repetitions_or_iterations: int
    fidelity_to_target: float
    ledger: MessageLedger
    final_success_prob: float = 1.0
    output_state: np.ndarray | None = None
    target_state: np.ndarray | None = None
    joint_state: np.ndarray | None = None
    monolithic_state: np.ndarray | None = None
    uses: int = 0
    failed: bool = False
    notes: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def tv_distance(self) -> float:
        if self.target_state is None or self.failed:
            return float("nan")
        q = np.abs(self.target_state) ** 2
        return 0.5 * float(np.abs(self.output_distribution - q / q.sum()).sum())

    @property
    def monolithic_gap(self) -> float:
        if self.joint_state is None or self.monolithic_state is None:
            return float("nan")
        return float(np.abs(self.joint_state - self.monolithic_state).max())

    def csv_row(self, *, n: int, r: int, kappa: float, gamma: float, seed: int | None) -> dict:
        return csv_row(
            self.protocol,
            self.ledger,
            n=n,
            r=r,
            kappa=kappa,
            gamma=gamma,
            success_prob=self.success_prob,
            fidelity=self.fidelity_to_target,
            tv_distance=self.tv_distance,
            seed=seed,
        )


def fidelity(x: np.ndarray, target: np.ndarray) -> float:
    x = np.asarray(x, dtype=complex)
    t = np.asarray(target, dtype=complex)
    nx, nt = np.linalg.norm(x), np.linalg.norm(t)
    if nx == 0 or nt == 0:
        return 0.0
    return float(min(1.0, abs(np.vdot(t, x)) ** 2 / (nx * nt) ** 2))


def _dist(x: np.ndarray) -> np.ndarray:
    p = np.abs(np.asarray(x)) ** 2
    s = p.sum()
    return p / s if s > 0 else p


def _basis(dim: int, k: int = 0) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[k] = 1.0
    return v


def _pad(v: np.ndarray, dim: int) -> np.ndarray:
    out = np.zeros(dim, dtype=complex)
    out[: v.size] = v
    return out


def _failure(protocol, ledger, p, dim, notes, target=None) -> ProtocolOutcome:
    return ProtocolOutcome(
        protocol=protocol,
        output_distribution=np.full(dim, 1.0 / dim),
        success_prob=float(p),
        repetitions_or_iterations=0,
        fidelity_to_target=0.0,
        ledger=ledger,
        final_success_prob=0.0,
        target_state=target,
        failed=True,
        notes=list(notes),
    )


def grover_count(p: float) -> int:
    """Grover iterations k with (2k+1) theta just past pi/2."""
    if p >= 1 - 1e-12:
        return 0
    theta = math.asin(math.sqrt(p))
    return max(0, math.ceil(math.pi / (4 * theta)) - 1)


# --------------------------------------------------------------------------
# Two-party regression


def _prepare_two_party(A, b):
    A = as_matrix(A)
    bv = as_vector(b)
    if bv.size != A.shape[0]:
        raise ContractError(f"b has length {bv.size}, expected {A.shape[0]}")
    bhat = normalize(bv).astype(complex)
    Ap = pseudoinverse(A)
    if not np.any(Ap):
        raise DegenerateInputError("A is the zero matrix")
    return A, bhat, Ap, Ap @ bhat


def _case1_encoding(Ap: np.ndarray) -> tuple[np.ndarray, float]:
    nrm = float(np.linalg.norm(Ap, 2))
    return dilation_unitary(Ap / nrm), nrm


def regression_case1_b_to_a(A, b, mode: str = "repeat", c: int = REPEAT_CONSTANT) -> ProtocolOutcome:
    """Bob ships copies of |b>; Alice applies the dilation of A^+ / |A^+| and measures the flag.

    ``mode='postselect'`` runs one copy. ``mode='repeat'`` charges
    ceil(c / p) copies, or the classical vector when that exceeds
    ceil(c m log2(mn)) copies.
    """
    if mode not in ("postselect", "repeat"):
        raise ContractError(f"unknown mode {mode!r}")
    A, bhat, Ap, x = _prepare_two_party(A, b)
    m, n = A.shape
    ledger = MessageLedger(Topology("two_party_one_way_BtoA"))
    U, nrm = _case1_encoding(Ap)
    N = U.shape[0] // 2
    p = float(np.vdot(x, x).real) / nrm**2
    if p <= TINY:
        send_registers(DistributedState.product([("b", bhat, BOB)]), ["b"], ALICE, ledger, "copy of |b>")
        return _failure("case1", ledger, 0.0, n, ["b is orthogonal to the column space of A"], x)
    copies = 1 if mode == "postselect" else math.ceil(c / p)
    cap = math.ceil(c * m * max(1.0, math.log2(m * n)))
    if mode == "repeat" and copies > cap:
        send_classical(m * bits_per_entry(m, n), BOB, ALICE, ledger, "classical b")
        return ProtocolOutcome(
            "case1", _dist(x), p, 0, 1.0, ledger, 1.0, normalize(x), x, uses=0, notes=["classical fallback"]
        )
    state = DistributedState.product([("b", bhat, BOB)])
    for k in range(copies):
        state = send_registers(state, ["b"], ALICE, ledger, f"copy {k} of |b>") if k == 0 else state
        if k:
            ledger.record(BOB, ALICE, qubits=max(1, qubits_for(m)), label=f"copy {k} of |b>")
    state = state.embed("b", N).add_register("flag", _basis(2), ALICE)
    steps = [C.Local(ALICE, U, ("flag", "b"), "U_A")]
    start = state.amplitudes.copy()
    state = C.run_distributed(state, steps, ledger)
    prob, out = state.branch("flag", 0)
    out = out[:n]
    mono = C.run_monolithic(state.registers, start, steps)
    final = 1.0 - (1.0 - p) ** copies
    return ProtocolOutcome(
        "case1",
        _dist(out),
        float(prob),
        copies,
        fidelity(out, x),
        ledger,
        final if mode == "repeat" else float(prob),
        normalize(out),
        x,
        state.amplitudes,
        mono,
        uses=copies,
    )


def _choi_state(Ap: np.ndarray) -> np.ndarray:
    return (Ap / np.linalg.norm(Ap)).reshape(-1)


def regression_case2_a_to_b(A, b, mode: str = "repeat", c: int = REPEAT_CONSTANT) -> ProtocolOutcome:
    """Alice ships copies of |A^+>; Bob rotates the column register by U_b^H and keeps outcome 0.

    ``mode='postselect'`` runs one copy. ``mode='repeat'`` charges
    ceil(c / p) copies, or the classical matrix when that costs more qubits
    than ceil(c m n log2(mn)).
    """
    if mode not in ("postselect", "repeat"):
        raise ContractError(f"unknown mode {mode!r}")
    A, bhat, Ap, x = _prepare_two_party(A, b)
    m, n = A.shape
    ledger = MessageLedger(Topology("two_party_one_way_AtoB"))
    F = float(np.linalg.norm(Ap))
    p = float(np.vdot(x, x).real) / F**2
    width = max(1, qubits_for(m * n))
    if p <= TINY:
        ledger.record(ALICE, BOB, qubits=width, label="copy of |A+>")
        return _failure("case2", ledger, 0.0, n, ["b is orthogonal to the column space of A"], x)
    copies = 1 if mode == "postselect" else math.ceil(c / p)
    cap_qubits = math.ceil(c * m * n * max(1.0, math.log2(m * n)))
    if mode == "repeat" and copies * width > cap_qubits:
        send_classical(m * n * bits_per_entry(m, n), ALICE, BOB, ledger, "classical A")
        return ProtocolOutcome(
            "case2", _dist(x), p, 0, 1.0, ledger, 1.0, normalize(x), x, uses=0, notes=["classical fallback"]
        )
    regs = [Register("row", n, ALICE), Register("col", m, ALICE)]
    state = DistributedState(regs, _choi_state(Ap))
    start = state.amplitudes.copy()
    state = send_registers(state, ["row", "col"], BOB, ledger, "copy 0 of |A+>")
    for k in range(1, copies):
        ledger.record(ALICE, BOB, qubits=width, label=f"copy {k} of |A+>")
    Ub = unitary_with_first_column(np.conj(bhat))
    steps = [C.Local(BOB, Ub.conj().T, ("col",), "U_b^H")]
    state = C.run_distributed(state, steps, ledger)
    prob, out = state.branch("col", 0)
    mono = C.run_monolithic(regs, start, steps)
    return ProtocolOutcome(
        "case2",
        _dist(out),
        float(prob),
        copies,
        fidelity(out, x),
        ledger,
        1.0 - (1.0 - p) ** copies if mode == "repeat" else float(prob),
        normalize(out),
        x,
        state.amplitudes,
        mono,
        uses=copies,
    )


def regression_case3_two_way(
    A, b, schedule: str = "exact", seed: int | None = 0, c: int = REPEAT_CONSTANT
) -> ProtocolOutcome:
    """Amplitude amplification with Alice's U_A shuttled for every use.

    Each Grover iteration costs four messages: the state goes to Alice for
    U_A^H, returns for Bob's reflection about |0, b>, goes back for U_A and
    returns. Bob's reflections are local.
    ``schedule='oblivious'`` runs the randomised exponential search instead of
    using the known success probability.
    """
    if schedule not in ("exact", "oblivious"):
        raise ContractError(f"unknown schedule {schedule!r}")
    A, bhat, Ap, x = _prepare_two_party(A, b)
    m, n = A.shape
    ledger = MessageLedger(Topology("two_party_two_way"))
    U, nrm = _case1_encoding(Ap)
    N = U.shape[0] // 2
    p = float(np.vdot(x, x).real) / nrm**2
    b0 = np.kron(_basis(2), _pad(bhat, N))
    refl_b = 2 * np.outer(b0, b0.conj()) - np.eye(2 * N)
    good = np.zeros(2 * N)
    good[:n] = 1.0
    S_good = np.diag(1 - 2 * good).astype(complex)

    def attempt(k: int):
        state = DistributedState.product([("b", bhat, BOB)])
        state = send_registers(state, ["b"], ALICE, ledger, "|b>")
        state = state.embed("b", N).add_register("flag", _basis(2), ALICE)
        start = state.amplitudes.copy()
        steps: list[C.Step] = [C.Local(ALICE, U, ("flag", "b"), "U_A"), C.Send(("flag", "b"), BOB, "U_A|0,b>")]
        for _ in range(k):
            steps += [
                C.Local(BOB, S_good, ("flag", "b"), "flag reflection"),
                C.Remote(ALICE, U.conj().T, ("flag", "b"), "U_A^H"),
                C.Local(BOB, refl_b, ("flag", "b"), "reflection about |0,b>"),
                C.Remote(ALICE, U, ("flag", "b"), "U_A"),
            ]
        state = C.run_distributed(state, steps, ledger)
        order = state.names
        mono = C.run_monolithic(state.registers, start, steps)
        prob, out = state.branch("flag", 0)
        return state, mono, float(prob), out[:n]

    if p <= TINY:
        attempt(0)
        return _failure("case3", ledger, 0.0, n, ["success probability is zero; amplification cannot start"], x)

    if schedule == "exact":
        k = grover_count(p)
        state, mono, prob, out = attempt(k)
        return ProtocolOutcome(
            "case3",
            _dist(out),
            p,
            k + 1,
            fidelity(out, x),
            ledger,
            prob,
            normalize(out),
            x,
            state.amplitudes,
            mono,
            uses=2 * k + 1,
            details={"grover_iterations": k},
        )

    rng = np.random.default_rng(seed)
    M, lam = 1.0, 6 / 5
    M_max = math.sqrt(c * m * max(1.0, math.log2(m * n)))
    uses = 0
    for tries in range(1, 65):
        k = int(rng.integers(0, max(1, math.ceil(M))))
        state, mono, prob, out = attempt(k)
        uses += 2 * k + 1
        if rng.random() < prob:
            return ProtocolOutcome(
                "case3",
                _dist(out),
                p,
                tries,
                fidelity(out, x),
                ledger,
                prob,
                normalize(out),
                x,
                state.amplitudes,
                mono,
                uses=uses,
                notes=["oblivious schedule"],
            )
        M = min(lam * M, M_max)
    return _failure("case3", ledger, p, n, ["oblivious search exhausted its attempt budget"], x)


# --------------------------------------------------------------------------
# Coordinator model


def _parties(r: int) -> list[str]:
    return [party_name(i) for i in range(r)]


def _norm_bits(total_rows: int, cols: int) -> int:
    return bits_per_entry(total_rows, cols)


def _prep_steps(parts_b: Sequence[np.ndarray], sel_amplitudes: np.ndarray, d: int, work_dim: int) -> list[C.Step]:
    """Referee prepares the selector, then each party loads its normalised block.

    Party i's load is routed on the first ``d`` coordinates of ``work`` when
    the selector reads i; only ``ceil(log2 d)`` qubits travel each way.
    """
    R = sel_amplitudes.size
    steps: list[C.Step] = [C.Local(REFEREE, unitary_with_first_column(sel_amplitudes), ("sel",), "selector prep")]
    for i, bi in enumerate(parts_b):
        if not np.any(bi):
            continue
        Ui = np.eye(work_dim, dtype=complex)
        Ui[:d, :d] = unitary_with_first_column(_pad(normalize(as_vector(bi)), d))
        sel_proj = np.zeros((R, R))
        sel_proj[i, i] = 1.0
        ctrl = np.kron(sel_proj, Ui) + np.kron(np.eye(R) - sel_proj, np.eye(work_dim))
        steps.append(C.Routed(party_name(i), ctrl, ("sel", "work"), max(1, qubits_for(d)), f"load b_{i}"))
    return steps


def _norm_messages(ledger: MessageLedger, vals: Sequence[float], bits: int, label: str) -> None:
    for i, _ in enumerate(vals):
        send_classical(bits, party_name(i), REFEREE, ledger, f"{label} {i}")


def coordinator_state_prep_b(parts_b: Sequence, norm_bits: int | None = None):
    """Referee ends with sum_i (|b_i| / |b|) |i>|b_i / |b_i|>.

    Returns (state, ledger). Each party sends its norm as bits, then every
    nonzero block is loaded by one routed round trip. The state has
    registers ``sel`` (padded to a power of two) and ``work`` (the data).
    """
    parts = [as_vector(bi) for bi in parts_b]
    r = len(parts)
    norms = np.array([np.linalg.norm(bi) for bi in parts])
    total = float(np.linalg.norm(norms))
    if total == 0:
        raise DegenerateInputError("all b_i are zero")
    d = max(bi.size for bi in parts)
    R = 1 << qubits_for(r)
    ledger = MessageLedger(Topology("coordinator", max(r, 2)))
    bits = norm_bits or bits_per_entry(sum(bi.size for bi in parts), 1)
    _norm_messages(ledger, norms, bits, "|b_i|")
    sel = _pad(norms / total, R)
    regs = [Register("sel", R, REFEREE), Register("work", d, REFEREE)]
    state = DistributedState(regs, _basis(R * d))
    state = C.run_distributed(state, _prep_steps(parts, sel, d, d), ledger)
    return state, ledger


def _party_encoding(Ai: np.ndarray, rows_pad: int, owner: str) -> BlockEncoding:
    """Dilation of a row block zero-padded to ``rows_pad`` rows; zero blocks cost nothing."""
    d, n = Ai.shape
    P = np.zeros((rows_pad, n), dtype=Ai.dtype)
    P[:d] = Ai
    nrm = float(np.linalg.norm(Ai, 2)) if Ai.size else 0.0
    U = dilation_unitary(P / nrm if nrm > 0 else P)
    cost = UseCost(((owner, qubits_for(U.shape[0])),)) if nrm > 0 else UseCost()
    return BlockEncoding(U, nrm if nrm > 0 else PAD_ALPHA, 1, 0.0, np.arange(d), np.arange(n), cost, f"dilation[{owner}]")


def _inverse_poly_for(delta_prime: float, eps: float):
    # Relative error of the output vector is at most eps_poly * 4 / (3 delta'),
    # so this choice keeps the infidelity below eps / 4.
    eps_poly = min(0.5, 0.375 * delta_prime * math.sqrt(eps))
    return inverse_poly(delta_prime, eps_poly).scaled(0.5), eps_poly


@dataclass
class _Amplified:
    state: DistributedState
    mono: np.ndarray
    p: float
    k: int
    final: float


def _amplify(
    regs: list[Register],
    prepare: list[C.Step],
    good: np.ndarray,
    ledger: MessageLedger,
    amplify: bool = True,
) -> _Amplified:
    """Exact-angle amplitude amplification on the referee's registers.

    ``good`` is a boolean mask over the joint basis of ``regs``; an ``amp``
    ancilla (last register) is added and scaled so that the rotated angle is
    exactly pi / (2(2k+1)).
    """
    start = _basis(int(np.prod([r.dim for r in regs])))
    probe = C.run_monolithic(regs, start, prepare)
    p = float(np.sum(np.abs(probe[good]) ** 2))
    if p <= TINY:
        raise DegenerateInputError("flagged branch has zero amplitude")
    k = grover_count(p) if amplify else 0
    theta = math.asin(math.sqrt(min(1.0, p)))
    target = math.pi / (2 * (2 * k + 1)) if amplify else theta
    ratio = min(1.0, math.sin(target) / math.sin(theta))
    rot = np.array([[ratio, -math.sqrt(1 - ratio**2)], [math.sqrt(1 - ratio**2), ratio]], dtype=complex)
    all_regs = list(regs) + [Register("amp", 2, REFEREE)]
    good2 = np.kron(good.astype(float), np.array([1.0, 0.0])) > 0
    A_op = prepare + [C.Local(REFEREE, rot, ("amp",), "amplitude trim")]
    dim = int(np.prod([r.dim for r in all_regs]))
    S_good = np.diag(np.where(good2, -1.0, 1.0)).astype(complex)
    zero = _basis(dim)
    R0 = 2 * np.outer(zero, zero) - np.eye(dim)
    names = tuple(r.name for r in all_regs)
    steps = list(A_op)
    for _ in range(k):
        steps += [C.Local(REFEREE, S_good, names, "good reflection")]
        steps += C.inverse(A_op)
        steps += [C.Local(REFEREE, R0, names, "initial reflection")]
        steps += A_op
    state = DistributedState(all_regs, _basis(dim))
    state = C.run_distributed(state, steps, ledger)
    mono = C.run_monolithic(all_regs, _basis(dim), steps)
    final = float(np.sum(np.abs(state.amplitudes[good2]) ** 2))
    return _Amplified(state, mono, p, k, final)


def _good_output(state: DistributedState, good: np.ndarray, out_index: np.ndarray) -> np.ndarray:
    amp = state.amplitudes.reshape(-1, 2)[:, 0]
    return amp[out_index]


def coordinator_regression(
    parts_A: Sequence,
    parts_b: Sequence,
    delta: float | None = None,
    eps: float = 1e-3,
    amplify: bool = True,
) -> ProtocolOutcome:
    """Stacked-row regression in the coordinator model.

    The referee combines the parties' dilations by row stacking, takes the
    Hermitian dilation, applies a scaled inverse polynomial and amplifies the
    flagged branch. ``delta`` defaults to the smallest nonzero singular value;
    a larger delta yields the truncated solution, which becomes the target.
    """
    mats = [as_matrix(Ai) for Ai in parts_A]
    vecs = [as_vector(bi) for bi in parts_b]
    r = len(mats)
    if r == 0 or len(vecs) != r:
        raise ContractError("need one (A_i, b_i) pair per party")
    n = mats[0].shape[1]
    for Ai, bi in zip(mats, vecs):
        if Ai.shape[1] != n or bi.size != Ai.shape[0]:
            raise ContractError("party blocks must share a column count and match their b_i")
    A = np.vstack(mats)
    b = np.concatenate(vecs)
    stats = spectrum_stats(A, b)
    rows = [Ai.shape[0] for Ai in mats]
    d_max = max(rows)
    total_rows = sum(rows)
    notes: list[str] = []
    delta = stats.min_nonzero_sv if delta is None else float(delta)
    dec = svd(A)
    keep = dec.singular_values >= delta * (1 - 1e-12)
    if delta > stats.min_nonzero_sv * (1 + 1e-12):
        notes.append("delta exceeds the smallest singular value: target is the truncated solution")
    k_keep = int(np.sum(keep))
    Ap_trunc = (dec.right_vectors[:, :k_keep] / dec.singular_values[:k_keep]) @ dec.left_vectors[:, :k_keep].conj().T
    bhat = normalize(b).astype(complex)
    target = Ap_trunc @ bhat

    ledger = MessageLedger(Topology("coordinator", max(r, 2)))
    bits = _norm_bits(total_rows, n)
    _norm_messages(ledger, [np.linalg.norm(Ai, 2) for Ai in mats], bits, "|A_i|")
    encs = [_party_encoding(Ai, d_max, party_name(i)) for i, Ai in enumerate(mats)]
    stack = stack_lcu(encs) if r > 1 else encs[0]
    herm = hermitian_dilation(stack)
    alpha = stack.alpha
    dprime = min(delta / alpha, 0.5)
    poly, eps_poly = _inverse_poly_for(dprime, eps)
    W = exact_poly_encoding(herm, poly)

    R = 1 << qubits_for(r)
    Dw = max(W.dim, d_max)
    W_full = np.eye(Dw, dtype=complex)
    W_full[: W.dim, : W.dim] = W.unitary
    norms_b = np.array([np.linalg.norm(bi) for bi in vecs])
    sel = _pad(norms_b / np.linalg.norm(norms_b), R)
    prep = _prep_steps(vecs, sel, d_max, Dw)
    if r > 1:
        _norm_messages(ledger, norms_b, bits, "|b_i|")
    # Relabel (selector i, row k) -> (0, offset_i + k): a referee-local permutation.
    offsets = np.concatenate([[0], np.cumsum(rows)[:-1]])
    src = [i * Dw + k for i in range(r) for k in range(rows[i])]
    dst = [int(offsets[i]) + k for i in range(r) for k in range(rows[i])]
    perm = _permutation_completing(src, dst, R * Dw)
    prepare = prep + [
        C.Local(REFEREE, perm, ("sel", "work"), "relabel stacked rows"),
        C.Charged(REFEREE, W_full, ("work",), W.use_cost.trips, "poly(A) use"),
    ]
    out_index = total_rows + np.arange(n)
    good = np.zeros(R * Dw, dtype=bool)
    good[out_index] = True
    regs = [Register("sel", R, REFEREE), Register("work", Dw, REFEREE)]
    amp = _amplify(regs, prepare, good, ledger, amplify)
    out = _good_output(amp.state, good, out_index)
    scale = 0.375 * dprime * alpha
    bound = COORD_SUCCESS_CONSTANT * delta**2 * stats.gamma**2 / stats.op_norm**2
    return ProtocolOutcome(
        "coord",
        _dist(out),
        amp.p,
        amp.k,
        fidelity(out, target),
        ledger,
        amp.final,
        normalize(out),
        target,
        amp.state.amplitudes,
        amp.mono,
        uses=2 * amp.k + 1,
        notes=notes,
        details={
            "alpha": alpha,
            "delta": delta,
            "delta_prime": dprime,
            "poly_degree": poly.degree,
            "poly_eps": eps_poly,
            "success_bound": bound,
            "expected_success": float(scale**2 * np.vdot(target, target).real),
            "kappa": stats.kappa,
            "gamma": stats.gamma,
        },
    )


def _permutation_completing(src: Sequence[int], dst: Sequence[int], dim: int) -> np.ndarray:
    """Permutation matrix sending basis src[k] to dst[k], extended bijectively."""
    mapping = dict(zip(src, dst))
    free_dst = [j for j in range(dim) if j not in set(dst)]
    free_src = [i for i in range(dim) if i not in mapping]
    mapping.update(zip(free_src, free_dst))
    P = np.zeros((dim, dim))
    for i, j in mapping.items():
        P[j, i] = 1.0
    return P


def coordinator_sum_regression(
    parts_A: Sequence,
    parts_b: Sequence,
    delta: float | None = None,
    eps: float = 1e-3,
    amplify: bool = True,
) -> ProtocolOutcome:
    """Regression for A = sum A_i, b = sum b_i with LCU state preparation of b."""
    mats = [as_matrix(Ai) for Ai in parts_A]
    vecs = [as_vector(bi) for bi in parts_b]
    r = len(mats)
    if r == 0 or len(vecs) != r:
        raise ContractError("need one (A_i, b_i) pair per party")
    shape = mats[0].shape
    if any(M.shape != shape for M in mats) or any(v.size != shape[0] for v in vecs):
        raise ContractError("all parties must hold blocks of the same shape")
    A = sum(mats[1:], mats[0].astype(complex))
    b = sum(vecs[1:], vecs[0].astype(complex))
    if not np.any(A):
        raise DegenerateInputError("A = sum A_i is zero")
    if not np.any(b):
        raise DegenerateInputError("b = sum b_i is zero")
    d, n = shape
    stats = spectrum_stats(A, b)
    delta = stats.min_nonzero_sv if delta is None else float(delta)
    notes: list[str] = []
    if delta > stats.min_nonzero_sv * (1 + 1e-12):
        notes.append("delta exceeds the smallest singular value: target is the truncated solution")
    dec = svd(A)
    k_keep = int(np.sum(dec.singular_values >= delta * (1 - 1e-12)))
    Ap_trunc = (dec.right_vectors[:, :k_keep] / dec.singular_values[:k_keep]) @ dec.left_vectors[:, :k_keep].conj().T
    target = Ap_trunc @ normalize(b)

    live = [i for i in range(r) if np.any(mats[i])]
    ledger = MessageLedger(Topology("coordinator", max(r, 2)))
    bits = _norm_bits(d, n)
    _norm_messages(ledger, [np.linalg.norm(Ai, 2) for Ai in mats], bits, "|A_i|")
    encs = [_party_encoding(mats[i], d, party_name(i)) for i in live]
    lcu = sum_lcu(encs) if len(encs) > 1 else encs[0]
    herm = hermitian_dilation(lcu)
    alpha = lcu.alpha
    dprime = min(delta / alpha, 0.5)
    poly, eps_poly = _inverse_poly_for(dprime, eps)
    W = exact_poly_encoding(herm, poly)

    R = 1 << qubits_for(r)
    Dw = max(W.dim, d)
    W_full = np.eye(Dw, dtype=complex)
    W_full[: W.dim, : W.dim] = W.unitary
    norms_b = np.array([np.linalg.norm(bi) for bi in vecs])
    beta = float(norms_b.sum())
    sel = _pad(np.sqrt(norms_b / beta), R)
    _norm_messages(ledger, norms_b, bits, "|b_i|")
    prep = _prep_steps(vecs, sel, d, Dw)
    V = unitary_with_first_column(sel)
    prepare = prep + [
        C.Local(REFEREE, V.conj().T, ("sel",), "selector unprepare"),
        C.Charged(REFEREE, W_full, ("work",), W.use_cost.trips, "poly(A) use"),
    ]
    out_index = d + np.arange(n)
    good = np.zeros(R * Dw, dtype=bool)
    good[out_index] = True
    regs = [Register("sel", R, REFEREE), Register("work", Dw, REFEREE)]
    amp = _amplify(regs, prepare, good, ledger, amplify)
    out = _good_output(amp.state, good, out_index)
    prep_success = (np.linalg.norm(b) / beta) ** 2
    return ProtocolOutcome(
        "coord-sum",
        _dist(out),
        amp.p,
        amp.k,
        fidelity(out, target),
        ledger,
        amp.final,
        normalize(out),
        target,
        amp.state.amplitudes,
        amp.mono,
        uses=2 * amp.k + 1,
        notes=notes,
        details={
            "alpha": alpha,
            "delta": delta,
            "delta_prime": dprime,
            "poly_degree": poly.degree,
            "state_prep_success": float(prep_success),
            "kappa": stats.kappa,
            "gamma": stats.gamma,
        },
    )


# --------------------------------------------------------------------------
# Hamiltonian simulation


def _check_hermitian(H: np.ndarray) -> None:
    if H.shape[0] != H.shape[1] or np.abs(H - H.conj().T).max() > 1e-10:
        raise ContractError("Hamiltonian must be square and Hermitian")


def _propagator(H: np.ndarray, t: float) -> np.ndarray:
    w, V = np.linalg.eigh(H)
    return (V * np.exp(1j * w * t)) @ V.conj().T


def hamiltonian_sim_two_party(H, psi, t: float, direction: str = "BtoA", c: int = REPEAT_CONSTANT) -> ProtocolOutcome:
    """Alice holds H, Bob holds |psi>; output e^{iHt}|psi>.

    ``direction`` is 'BtoA', 'two_way' (Bob ships |psi> and Alice applies the
    propagator) or 'AtoB' (one-way from Alice: the Choi-state protocol with
    the unitary e^{-iHt}, whose pseudoinverse is the propagator).
    """
    H = as_matrix(H).astype(complex)
    _check_hermitian(H)
    psi = normalize(as_vector(psi).astype(complex))
    n = H.shape[0]
    if psi.size != n:
        raise ContractError("psi has the wrong dimension")
    Ut = _propagator(H, t)
    target = Ut @ psi
    if direction == "AtoB":
        out = regression_case2_a_to_b(Ut.conj().T, psi, c=c)
        out.protocol = "hsim2"
        out.target_state = target
        out.fidelity_to_target = fidelity(out.output_state, target)
        return out
    if direction not in ("BtoA", "two_way"):
        raise ContractError(f"unknown direction {direction!r}")
    kind = "two_party_one_way_BtoA" if direction == "BtoA" else "two_party_two_way"
    ledger = MessageLedger(Topology(kind))
    state = DistributedState.product([("psi", psi, BOB)])
    start = state.amplitudes.copy()
    state = send_registers(state, ["psi"], ALICE, ledger, "|psi>")
    steps = [C.Local(ALICE, Ut, ("psi",), "e^{iHt}")]
    state = C.run_distributed(state, steps, ledger)
    mono = C.run_monolithic(state.registers, start, steps)
    out = state.amplitudes
    return ProtocolOutcome(
        "hsim2", _dist(out), 1.0, 1, fidelity(out, target), ledger, 1.0, out, target, out, mono, uses=1
    )


def hamiltonian_sim_coordinator(H_parts: Sequence, psi, t: float, eps: float = 1e-4) -> ProtocolOutcome:
    """Referee holds |psi>; party i holds H_i; output e^{i (sum H_i) t}|psi>.

    The parties' dilations are summed by LCU, cos and sin of alpha t x are
    applied as halved Jacobi-Anger polynomials, the two are combined as
    cos + i sin by a second LCU, and the resulting 1/4-scaled propagator is
    amplified to certainty.
    """
    if not (0 < eps < 1 / math.e):
        raise ContractError("eps must lie in (0, 1/e)")
    mats = [as_matrix(H).astype(complex) for H in H_parts]
    if not mats:
        raise ContractError("need at least one Hamiltonian")
    n = mats[0].shape[0]
    for H in mats:
        _check_hermitian(H)
        if H.shape != (n, n):
            raise ContractError("all Hamiltonians must share one dimension")
    psi = normalize(as_vector(psi).astype(complex))
    r = len(mats)
    Htot = sum(mats[1:], mats[0].copy())
    target = _propagator(Htot, t) @ psi
    ledger = MessageLedger(Topology("coordinator", max(r, 2)))
    live = [i for i in range(r) if np.any(mats[i])]
    _norm_messages(ledger, mats, _norm_bits(n, n), "|H_i|")
    if not live or t == 0:
        state = DistributedState.product([("work", psi, REFEREE)])
        return ProtocolOutcome(
            "hsim-coord", _dist(psi), 1.0, 0, fidelity(psi, target), ledger, 1.0, psi, target, psi, psi.copy(),
            notes=["trivial evolution"],
        )
    encs = [_party_encoding(mats[i], n, party_name(i)) for i in live]
    base = sum_lcu(encs) if len(encs) > 1 else encs[0]
    alpha = base.alpha
    # |cos - P_c| + |sin - P_s| <= 2 eps', and the normalised output then has
    # infidelity at most (2 eps' / (1 - 2 eps'))^2 <= eps when eps' = sqrt(eps)/4.
    eps_ja = math.sqrt(eps) / 4
    cos_p, sin_p = jacobi_anger(alpha * t, eps_ja)
    half = 1.0 / (2 * (1 + eps_ja))
    Wc = exact_poly_encoding(base, cos_p.scaled(half))
    Ws = exact_poly_encoding(base, sin_p.scaled(half))
    Ws_i = BlockEncoding(1j * Ws.unitary, Ws.alpha, Ws.ancilla_qubits, 0.0, Ws.row_index, Ws.col_index, Ws.use_cost, "i*sin")
    W = sum_lcu([Wc, Ws_i])
    regs = [Register("work", W.dim, REFEREE)]
    load = unitary_with_first_column(_pad(psi, W.dim))
    prepare = [
        C.Local(REFEREE, load, ("work",), "load psi"),
        C.Charged(REFEREE, W.unitary, ("work",), W.use_cost.trips, "e^{iHt} block use"),
    ]
    good = np.zeros(W.dim, dtype=bool)
    good[W.row_index] = True
    amp = _amplify(regs, prepare, good, ledger, True)
    out = _good_output(amp.state, good, W.row_index)
    return ProtocolOutcome(
        "hsim-coord",
        _dist(out),
        amp.p,
        amp.k,
        fidelity(out, target),
        ledger,
        amp.final,
        normalize(out),
        target,
        amp.state.amplitudes,
        amp.mono,
        uses=2 * amp.k + 1,
        details={"alpha": alpha, "cos_degree": cos_p.degree, "sin_degree": sin_p.degree, "poly_eps": eps_ja},
    )
