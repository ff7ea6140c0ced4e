"""Variable-time inversion: gapped phase estimation, truncated inverses and the staged solver.

Gapped phase estimation (GPE) runs phase estimation with a Kaiser-windowed
ancilla register, copies the threshold bit into a clock qubit and uncomputes,
so the ancilla returns close to its start state whenever the eigenphase is
far from the threshold.

The solver runs T stages. Stage j acts only on the branch whose clock qubits
are all 0. It detects eigenvalues of size about 2^-j, and on detection
applies an inverse polynomial accurate down to 2^-(j+1). Every stage uses one
common output scale, so the flagged branch is proportional to A^-1 b whatever
stage fired. Between stages, exact-angle amplitude amplification restores the
surviving branch (flagged-good plus still running) to unit norm. That step is
where the variable-time saving over a single amplification comes from.

Two independent simulations produce the flagged reduced state:

* ``_simulate_eigen`` uses the eigendecomposition and closed-form overlaps of
  the ancilla states. It scales to every size used here.
* ``_simulate_registers`` keeps every register explicit in the computational
  basis, with e^{iH} from a matrix exponential. It is only feasible for small
  ancilla registers and serves as the monolithic reference.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.signal

from .blockenc import BlockEncoding, hermitian_dilation, unitary_dilation
from .comm import BOB, REFEREE, MessageLedger, Topology, charge_trips, party_name
from .errors import ContractError, DegenerateInputError, NumericalFailureError
from .linalg import as_matrix, as_vector, normalize, pseudoinverse
from .protocols import ProtocolOutcome, fidelity, grover_count
from .qsvt import exact_poly_encoding, inverse_poly, jacobi_anger

GPE_THRESHOLD = 1.5
GPE_CERT_POINTS = 400
# Each e^{iH} use is charged as the cos and sin polynomial encodings, tripled
# for the amplification that makes their sum unitary.
HSIM_OVERHEAD = 3


# --------------------------------------------------------------------------
# Gapped phase estimation


@dataclass(frozen=True)
class GpeParams:
    phi: float
    eps: float
    t: int
    beta: float

    @property
    def size(self) -> int:
        return 1 << self.t

    @property
    def uses(self) -> int:
        """Controlled-U applications: compute and uncompute."""
        return 2 * (self.size - 1)

    @property
    def ancillas(self) -> int:
        return self.t + 1

    def window(self) -> np.ndarray:
        w = scipy.signal.windows.kaiser(self.size, self.beta, sym=False)
        return w / np.linalg.norm(w)

    def flagged(self) -> np.ndarray:
        """Boolean mask over outcomes y whose phase estimate is at least 1.5 phi."""
        M = self.size
        y = np.arange(M)
        folded = np.where(y >= M // 2, y - M, y)
        return np.abs(2 * np.pi * folded / M) >= GPE_THRESHOLD * self.phi


KAISER_BETAS = tuple(float(b) for b in range(4, 25))


def gpe_outcomes(params: GpeParams, lam: np.ndarray) -> np.ndarray:
    """Outcome amplitudes a[y] for each eigenphase (rows: eigenphases)."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    x = np.arange(params.size)
    v = params.window()[None, :] * np.exp(1j * np.outer(lam, x))
    return np.fft.fft(v, axis=1, norm="ortho")


def gpe_flag_amplitudes(params: GpeParams, lam) -> np.ndarray:
    """(|alpha_0|, |alpha_1|) per eigenphase."""
    a = gpe_outcomes(params, lam)
    f = params.flagged()
    return np.stack([np.linalg.norm(a[:, ~f], axis=1), np.linalg.norm(a[:, f], axis=1)], axis=1)


def gpe_certificate(params: GpeParams, n: int = GPE_CERT_POINTS) -> float:
    """Worst wrong-flag amplitude over |lam| <= phi and 2 phi <= |lam| <= 1."""
    near = np.linspace(0.0, params.phi, n)
    far = np.linspace(2 * params.phi, 1.0, n)
    lam = np.concatenate([near, -near, far, -far])
    amps = gpe_flag_amplitudes(params, lam)
    wrong = np.concatenate([amps[: 2 * n, 1], amps[2 * n :, 0]])
    return float(wrong.max())


@functools.lru_cache(maxsize=256)
def gpe_parameters(phi: float, eps: float, max_extra_bits: int = 8) -> GpeParams:
    """Smallest register, then smallest Kaiser beta, whose estimate certifies the gap at ``eps``."""
    if not (0 < phi <= 0.25):
        raise ContractError(f"phi must lie in (0, 1/4], got {phi}")
    if not (0 < eps < 1):
        raise ContractError(f"eps must lie in (0, 1), got {eps}")
    t0 = math.ceil(math.log2(1 / phi))
    for t in range(t0 + 2, t0 + math.ceil(math.log2(1 / eps)) + max_extra_bits):
        for beta in KAISER_BETAS:
            params = GpeParams(phi, eps, t, beta)
            if gpe_certificate(params) <= eps:
                return params
    raise NumericalFailureError(f"no register size certifies GPE at phi={phi}, eps={eps}")


def _eigenphases(U: np.ndarray) -> np.ndarray:
    return np.angle(np.linalg.eigvals(U))


def _gpe_apply(U: np.ndarray, X: np.ndarray, params: GpeParams) -> tuple[np.ndarray, np.ndarray]:
    """Clean GPE on a (data x junk) block; returns the flag-0 and flag-1 blocks with the ancilla appended.

    Computational basis throughout: controlled U^x, inverse Fourier transform,
    threshold copy, then the first two steps inverted.
    """
    M = params.size
    n, J = X.shape
    Y = np.empty((n, J, M), dtype=complex)
    cur = X.astype(complex)
    w = params.window()
    for x in range(M):
        Y[:, :, x] = w[x] * cur
        cur = U @ cur
    A = np.fft.fft(Y, axis=2, norm="ortho")
    f = params.flagged()
    out = []
    Uinv = U.conj().T
    for mask in (~f, f):
        B = np.where(mask[None, None, :], A, 0)
        B = np.fft.ifft(B, axis=2, norm="ortho")
        cur = np.eye(n, dtype=complex)
        for x in range(M):
            B[:, :, x] = cur @ B[:, :, x]
            cur = Uinv @ cur
        out.append(B)
    return out[0], out[1]


@dataclass
class GpeResult:
    params: GpeParams
    eigenphases: np.ndarray
    flag_amplitudes: np.ndarray
    flag1_prob: float | None = None
    branches: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def uses(self) -> int:
        return self.params.uses

    @property
    def ancillas(self) -> int:
        return self.params.ancillas


def gapped_phase_estimation(U, phi: float, eps: float, state=None) -> GpeResult:
    """Flag eigenphases of ``U`` by size: |lam| <= phi gives flag 1 with amplitude <= eps,
    and 2 phi <= |lam| <= 1 gives flag 0 with amplitude <= eps.

    With ``state``, the flag-0 and flag-1 branches are returned as
    (data x ancilla) arrays in the computational basis.
    """
    U = as_matrix(U).astype(complex)
    if U.shape[0] != U.shape[1] or np.abs(U.conj().T @ U - np.eye(U.shape[0])).max() > 1e-9:
        raise ContractError("U must be unitary")
    lam = _eigenphases(U)
    if np.abs(lam).max() > 1 + 1e-9:
        raise ContractError("eigenphases of U must lie in [-1, 1]")
    params = gpe_parameters(phi, eps)
    res = GpeResult(params, lam, gpe_flag_amplitudes(params, lam))
    if state is not None:
        psi = normalize(as_vector(state).astype(complex))
        X0, X1 = _gpe_apply(U, psi[:, None], params)
        res.branches = (X0[:, 0, :], X1[:, 0, :])
        res.flag1_prob = float(np.linalg.norm(X1) ** 2)
    return res


# --------------------------------------------------------------------------
# Truncated inverse


def _hermitian_encoding(A) -> tuple[BlockEncoding, np.ndarray]:
    if isinstance(A, BlockEncoding):
        H = A.matrix()
        if H.shape[0] != H.shape[1] or np.abs(H - H.conj().T).max() > 1e-10:
            raise ContractError("the encoded matrix must be Hermitian")
        return A, H
    H = as_matrix(A).astype(complex)
    if H.shape[0] != H.shape[1] or np.abs(H - H.conj().T).max() > 1e-10:
        raise ContractError("A must be Hermitian; use vtaa_solve for general matrices")
    return unitary_dilation(H, owner=party_name(0)), H


@dataclass
class TruncatedInverse:
    encoding: BlockEncoding
    scale: float
    degree: int
    branch: np.ndarray | None = None
    residual: float | None = None

    @property
    def uses(self) -> int:
        return self.degree


def _inverse_scale(lam: float) -> float:
    """Common output scale 3 lam' / 8 with lam' = min(lam, 1/2)."""
    return 0.375 * min(lam, 0.5)


def truncated_inverse(A, lam: float, eps: float, state=None, scale: float | None = None) -> TruncatedInverse:
    """Flagged block ``scale * f(A / alpha)`` with ``f`` within ``eps`` of the inverse on |x| >= lam.

    ``scale`` defaults to the largest admissible value 3 lam / 8 and may be
    lowered to share one scale across several thresholds. With ``state``, the
    flagged branch and the residual |f(A/alpha) psi - (A/alpha)^-1 psi| are
    reported; a warning is issued when ``state`` has weight below the
    threshold.
    """
    if not (0 < lam <= 1):
        raise ContractError(f"lam must lie in (0, 1], got {lam}")
    if not (0 < eps < 1):
        raise ContractError(f"eps must lie in (0, 1), got {eps}")
    be, H = _hermitian_encoding(A)
    top = _inverse_scale(lam)
    scale = top if scale is None else float(scale)
    if not (0 < scale <= top * (1 + 1e-12)):
        raise ContractError(f"scale must lie in (0, {top}]")
    lp = min(lam, 0.5)
    # inverse_poly approximates (3 lp / 4) / x; halve and rescale to the target scale.
    poly_eps = min(0.5, eps * 0.75 * lp)
    poly = inverse_poly(lp, poly_eps).scaled(scale / (0.75 * lp))
    enc = exact_poly_encoding(be, poly)
    out = TruncatedInverse(enc, scale, poly.degree)
    if state is not None:
        psi = as_vector(state).astype(complex)
        Hn = H / be.alpha
        w, V = np.linalg.eigh(Hn)
        c = V.conj().T @ psi
        low = np.abs(w) < lam * (1 - 1e-12)
        if np.any(np.abs(c[low]) > 1e-10):
            warnings.warn("state has weight on eigenvalues below the truncation threshold", stacklevel=2)
        branch = enc.block() @ psi
        out.branch = branch
        out.residual = float(np.linalg.norm(branch / scale - pseudoinverse(Hn) @ psi))
    return out


# --------------------------------------------------------------------------
# Staged solver


@dataclass(frozen=True)
class VtaaConfig:
    """Stage schedule: T = ceil(log2 kappa) + 1 and phi_j = 2^-j."""

    kappa: float
    eps: float
    T: int = field(init=False)

    def __post_init__(self):
        if self.kappa < 1:
            raise ContractError("kappa must be >= 1")
        if not (0 < self.eps < 1):
            raise ContractError("eps must lie in (0, 1)")
        object.__setattr__(self, "T", math.ceil(math.log2(self.kappa) - 1e-12) + 1)

    def phi(self, j: int) -> float:
        return 2.0**-j

    @property
    def gpe_eps(self) -> float:
        return math.sqrt(self.eps) / (4 * self.T)

    @property
    def scale(self) -> float:
        """Output scale shared by all stages, set by the last threshold."""
        return _inverse_scale(self.phi(self.T) / 2)

    def poly_eps(self, j: int) -> float:
        # Relative amplitude error (eps_j / 2) * 8 / 3 / (phi_j / 2) kept below sqrt(eps) / 4.
        return min(0.5, 0.1875 * (self.phi(j) / 2) * math.sqrt(self.eps))


@dataclass
class _Stage:
    j: int
    gpe: GpeParams
    poly_degree: int
    w_unitary: np.ndarray
    poly_values: object


def _build_stages(be: BlockEncoding, cfg: VtaaConfig) -> list[_Stage]:
    stages = []
    for j in range(1, cfg.T + 1):
        gpe = gpe_parameters(cfg.phi(j) / 2, cfg.gpe_eps)
        lp = min(cfg.phi(j) / 2, 0.5)
        poly = inverse_poly(lp, cfg.poly_eps(j)).scaled(cfg.scale / (0.75 * lp))
        W = exact_poly_encoding(be, poly)
        stages.append(_Stage(j, gpe, poly.degree, W.unitary, poly))
    return stages


def _stage_states(params: GpeParams, lam: np.ndarray) -> np.ndarray:
    """Ancilla states (h_0, h_1, w) per eigenphase, x basis; shape (3, n, M).

    h_f is the ancilla after the clean GPE on the flag-f branch; w = h_0 + h_1
    is the start state.
    """
    a = gpe_outcomes(params, lam)
    f = params.flagged()
    phase = np.exp(-1j * np.outer(lam, np.arange(params.size)))
    h0 = np.fft.ifft(np.where(~f[None, :], a, 0), axis=1, norm="ortho") * phase
    h1 = np.fft.ifft(np.where(f[None, :], a, 0), axis=1, norm="ortho") * phase
    w = np.broadcast_to(params.window(), h0.shape)
    return np.stack([h0, h1, w])


def _simulate_eigen(Hn: np.ndarray, b: np.ndarray, stages: list[_Stage]) -> np.ndarray:
    """Flagged reduced state after the forward stages and the clock uncompute, eigenbasis form.

    Per eigenvector, the branch that fired at stage s leaves ancilla k in h_0
    (k < s), h_1 (k = s) or w (k > s) once the clock is reset, and carries
    amplitude c * p_s(lambda). Ancilla overlaps factor over stages.
    """
    lam, V = np.linalg.eigh(Hn)
    c = V.conj().T @ b
    n, T = lam.size, len(stages)
    grams = []
    for st in stages:
        X = _stage_states(st.gpe, lam).reshape(3 * n, -1)
        grams.append((X.conj() @ X.T).reshape(3, n, 3, n))  # [a, v, b, u] = <x_a(v)|x_b(u)>
    amp = np.array([c * st.poly_values(lam) for st in stages])  # (s, u)
    rho = np.zeros((n, n), dtype=complex)
    for s in range(T):
        for sp in range(T):
            ov = np.ones((n, n), dtype=complex)  # [v, u]
            for k in range(T):
                xu = 0 if k < s else (1 if k == s else 2)
                xv = 0 if k < sp else (1 if k == sp else 2)
                ov = ov * grams[k][xv, :, xu, :]
            rho += (amp[s][:, None] * amp[sp].conj()[None, :]) * ov.T
    return V @ rho @ V.conj().T


REGISTER_SIM_LIMIT = 1 << 22


def register_sim_size(n: int, stages: list[_Stage]) -> int:
    return n * 4 * int(np.prod([2 * st.gpe.size for st in stages]))


def _simulate_registers(Hn: np.ndarray, b: np.ndarray, stages: list[_Stage]) -> np.ndarray:
    """Computational-basis run with every register explicit.

    Axes: data, clock_1..clock_T, P_1..P_T, q (W ancilla), F (success flag).
    e^{iH} comes from a matrix exponential; controlled powers are applied
    slice by slice, the threshold copy flips the clock qubit, and the clock is
    reset at the end by replaying the GPEs in reverse order.
    """
    n, T = Hn.shape[0], len(stages)
    U = scipy.linalg.expm(1j * Hn)
    Ui = U.conj().T
    shape = [n] + [2] * T + [st.gpe.size for st in stages] + [2, 2]
    state = np.zeros(shape, dtype=complex)
    idx0 = (slice(None),) + (0,) * T
    fresh = b.astype(complex)
    for st in stages:
        fresh = np.multiply.outer(fresh, st.gpe.window())
    state[idx0 + (Ellipsis, 0, 0)] = fresh

    def clock_ax(k):
        return 1 + k

    def anc_ax(k):
        return 1 + T + k

    def gpe(state, k):
        st = stages[k]
        sel = [slice(None)] * state.ndim
        for j in range(k):
            sel[clock_ax(j)] = 0
        sub = state[tuple(sel)]  # earlier clocks fixed at 0: axes shift by k
        pax = anc_ax(k) - k
        # Data stays first, this stage's clock is axis 1, its ancilla goes last.
        sub = np.moveaxis(sub, pax, -1).copy()
        M = st.gpe.size
        cur = np.eye(n, dtype=complex)
        for x in range(M):
            sub[..., x] = np.tensordot(cur, sub[..., x], axes=(1, 0))
            cur = U @ cur
        sub = np.fft.fft(sub, axis=-1, norm="ortho")
        f = st.gpe.flagged()
        sub = np.where(f, np.flip(sub, axis=1), sub)
        sub = np.fft.ifft(sub, axis=-1, norm="ortho")
        cur = np.eye(n, dtype=complex)
        for x in range(M):
            sub[..., x] = np.tensordot(cur, sub[..., x], axes=(1, 0))
            cur = Ui @ cur
        sub = np.moveaxis(sub, -1, pax)
        state[tuple(sel)] = sub
        return state

    for k, st in enumerate(stages):
        state = gpe(state, k)
        sel = [slice(None)] * state.ndim
        for j in range(k):
            sel[clock_ax(j)] = 0
        sel[clock_ax(k)] = 1
        sel[-1] = 0
        sub = state[tuple(sel)]  # axes: data, later clocks, ancillas, q
        sub = np.moveaxis(sub, (-1, 0), (0, 1))  # q, data, rest
        rest = sub.shape[2:]
        out = (st.w_unitary @ sub.reshape(2 * n, -1)).reshape((2, n) + rest)
        out = np.moveaxis(out, (0, 1), (-1, 0))
        good = np.zeros_like(out)
        good[..., 0] = out[..., 0]
        bad = out.copy()
        bad[..., 0] = 0
        state[tuple(sel)] = bad
        sel[-1] = 1
        state[tuple(sel)] += good
    for k in reversed(range(T)):
        state = gpe(state, k)
    flagged = state[..., 1].reshape(n, -1)
    return flagged @ flagged.conj().T


def _as_hermitian_problem(A, b):
    """(encoding, H, rhs, output slice, target) for A or its Hermitian dilation."""
    if isinstance(A, BlockEncoding):
        be, H = _hermitian_encoding(A)
        bv = as_vector(b).astype(complex)
        return be, H, bv, slice(0, H.shape[0]), pseudoinverse(H) @ normalize(bv)
    if isinstance(A, (list, tuple)):
        A = np.vstack([as_matrix(Ai) for Ai in A])
    M = as_matrix(A).astype(complex)
    bv = as_vector(b).astype(complex)
    if bv.size != M.shape[0]:
        raise ContractError(f"b has length {bv.size}, expected {M.shape[0]}")
    target = pseudoinverse(M) @ normalize(bv)
    if M.shape[0] == M.shape[1] and np.abs(M - M.conj().T).max() <= 1e-10:
        return unitary_dilation(M, owner=party_name(0)), M, bv, slice(0, M.shape[0]), target
    m, n = M.shape
    be = hermitian_dilation(unitary_dilation(M, owner=party_name(0)))
    H = np.zeros((m + n, m + n), dtype=complex)
    H[:m, m:] = M
    H[m:, :m] = M.conj().T
    rhs = np.concatenate([bv, np.zeros(n)])
    return be, H, rhs, slice(m, m + n), target


def _topology_for(be: BlockEncoding) -> tuple[Topology, str]:
    owners = set(be.use_cost.owners)
    if owners and all(o.startswith("party") for o in owners):
        r = max(int(o[5:]) for o in owners) + 1
        return Topology("coordinator", max(2, r)), REFEREE
    return Topology("two_party_two_way"), BOB


def vtaa_solve(A, b, eps: float = 1e-3, simulate: str = "auto") -> ProtocolOutcome:
    """Staged variable-time solver for A^+ b with exact-angle amplification between stages.

    ``A`` may be a Hermitian matrix, a general matrix (solved through its
    Hermitian dilation), a list of row blocks held by separate parties, or a
    block-encoding of a Hermitian matrix. The referee holds ``b``.
    The flagged state is computed in the eigenbasis. The register-level run
    is added as the monolithic reference when ``simulate='registers'``, or
    under ``'auto'`` when its dimension is at most ``REGISTER_SIM_LIMIT``.
    """
    if simulate not in ("auto", "registers", "eigen"):
        raise ContractError(f"unknown simulate mode {simulate!r}")
    be, H, rhs, out_slice, target = _as_hermitian_problem(A, b)
    if not np.any(rhs):
        raise DegenerateInputError("b is zero")
    Hn = H / be.alpha
    rhs = normalize(rhs)
    lam = np.linalg.eigvalsh(Hn)
    nz = np.abs(lam) > 1e-12 * max(1.0, np.abs(lam).max())
    if not np.any(nz):
        raise DegenerateInputError("A is zero")
    kappa = float(np.abs(lam[nz]).max() / np.abs(lam[nz]).min())
    kappa_eff = float(1.0 / np.abs(lam[nz]).min())
    cfg = VtaaConfig(max(kappa_eff, 1.0), eps)
    stages = _build_stages(be, cfg)
    rho = _simulate_eigen(Hn, rhs, stages)
    size = register_sim_size(Hn.shape[0], stages)
    notes = ["amplification uses the known survival ratios"]
    rho_reg = None
    if simulate == "registers" or (simulate == "auto" and size <= REGISTER_SIM_LIMIT):
        rho_reg = _simulate_registers(Hn, rhs, stages)
    else:
        notes.append(f"register-level reference skipped (dimension {size})")

    # Surviving mass (flagged-good plus running) after each stage, from the eigen reference.
    lam_all, V = np.linalg.eigh(Hn)
    c = V.conj().T @ rhs
    running = np.abs(c) ** 2
    good = 0.0
    masses = []
    for st in stages:
        amps = gpe_flag_amplitudes(st.gpe, lam_all)
        fired = running * amps[:, 1] ** 2
        good += float(np.sum(fired * np.abs(st.poly_values(lam_all)) ** 2))
        running = running * amps[:, 0] ** 2
        masses.append(good + float(running.sum()))

    cos_p, sin_p = jacobi_anger(1.0, cfg.gpe_eps / (4 * max(st.gpe.size for st in stages)))
    hsim_uses = HSIM_OVERHEAD * (cos_p.degree + sin_p.degree)
    table = []
    cost = 0
    prev = 1.0
    total_k = 0
    for st, mass in zip(stages, masses):
        ratio = mass / prev if prev > 0 else 0.0
        k = grover_count(min(1.0, ratio)) if ratio > 0 else 0
        stage_cost = st.gpe.uses * hsim_uses + st.poly_degree
        cost = (2 * k + 1) * (cost + stage_cost)
        total_k += k
        table.append(
            {
                "stage": st.j,
                "phi": cfg.phi(st.j),
                "gpe_bits": st.gpe.t,
                "gpe_uses": st.gpe.uses,
                "poly_degree": st.poly_degree,
                "survival_ratio": ratio,
                "grover_iterations": k,
                "cumulative_uses": cost,
            }
        )
        prev = mass
    # Clock reset, then amplification of the success flag itself.
    uncompute = sum(st.gpe.uses for st in stages) * hsim_uses
    final_ratio = good / prev if prev > 0 else 0.0
    if final_ratio <= 0:
        raise DegenerateInputError("flagged branch has zero amplitude")
    k_final = grover_count(min(1.0, final_ratio))
    cost = (2 * k_final + 1) * (cost + uncompute)
    total_k += k_final

    topo, hub = _topology_for(be)
    ledger = MessageLedger(topo)
    charge_trips(ledger, be.use_cost.trips, hub=hub, label="encoding use", times=cost)

    success = float(np.trace(rho).real)
    rho_out = rho[out_slice, out_slice]
    w, vecs = np.linalg.eigh(rho_out)
    top = vecs[:, -1] * math.sqrt(max(w[-1], 0.0))
    tnorm = normalize(target)
    tr = float(np.trace(rho_out).real)
    fid = float((tnorm.conj() @ rho_out @ tnorm).real / tr)
    dist = np.clip(np.diag(rho_out).real, 0, None)
    return ProtocolOutcome(
        "vtaa",
        dist / dist.sum(),
        success,
        total_k,
        fid,
        ledger,
        1.0,
        normalize(top),
        target,
        rho.reshape(-1),
        None if rho_reg is None else rho_reg.reshape(-1),
        uses=cost,
        notes=notes,
        details={
            "T": cfg.T,
            "kappa": kappa,
            "alpha": be.alpha,
            "stages": table,
            "uncompute_uses": uncompute,
            "final_grover_iterations": k_final,
            "hsim_uses_per_exp": hsim_uses,
            "purity": float(np.trace(rho_out @ rho_out).real / tr**2),
            "register_sim_size": size,
        },
    )


def fit_exponent(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)[0])
