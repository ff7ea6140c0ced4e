"""Problem generators with ownership maps and exact analytic metadata.

Index conventions are 0-based throughout. Set arguments are iterables of
ints; ``l`` or ``n`` gives the ambient size.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .comm import ALICE, BOB, REFEREE, party_name
from .errors import ContractError, DegenerateInputError
from .linalg import as_matrix, as_vector, pseudoinverse, pseudoinverse_from, spectrum_stats, svd

COMBINE_MODES = ("single", "stack", "sum")


@dataclass(eq=False)
class Instance:
    """A regression or Hamiltonian problem split among parties.

    ``matrices`` and ``vectors`` are the per-party pieces; ``combine`` says
    how they assemble into the global problem (row stack or sum). For
    Hamiltonian instances the vector is the initial state.
    """

    kind: str
    matrices: list[np.ndarray]
    vectors: list[np.ndarray]
    combine: str = "single"
    ownership: dict[str, str] = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    hamiltonian: bool = False

    def __post_init__(self):
        if self.combine not in COMBINE_MODES:
            raise ContractError(f"combine must be one of {COMBINE_MODES}")
        self.matrices = [as_matrix(M) for M in self.matrices]
        self.vectors = [as_vector(v) for v in self.vectors]

    @property
    def r(self) -> int:
        return len(self.matrices)

    @property
    def A(self) -> np.ndarray:
        if self.combine == "sum":
            return sum(self.matrices[1:], self.matrices[0].copy())
        return np.vstack(self.matrices)

    @property
    def b(self) -> np.ndarray:
        if self.combine == "sum" or self.hamiltonian:
            return sum(self.vectors[1:], self.vectors[0].copy())
        return np.concatenate(self.vectors)

    def to_json(self) -> str:
        payload = {
            "kind": self.kind,
            "combine": self.combine,
            "hamiltonian": self.hamiltonian,
            "ownership": self.ownership,
            "params": _plain(self.params),
            "metadata": _plain(self.metadata),
            "matrices": [_encode_array(M) for M in self.matrices],
            "vectors": [_encode_array(v) for v in self.vectors],
        }
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        d = json.loads(text)
        try:
            return cls(
                kind=d["kind"],
                matrices=[_decode_array(M) for M in d["matrices"]],
                vectors=[_decode_array(v) for v in d["vectors"]],
                combine=d.get("combine", "single"),
                ownership=d.get("ownership", {}),
                params=d.get("params", {}),
                metadata=d.get("metadata", {}),
                hamiltonian=d.get("hamiltonian", False),
            )
        except KeyError as exc:
            raise ContractError(f"instance file is missing field {exc}") from exc

    def same_as(self, other: "Instance", tol: float = 0.0) -> bool:
        """Structural equality (arrays compared to ``tol``)."""
        if (self.kind, self.combine, self.hamiltonian, self.ownership) != (
            other.kind,
            other.combine,
            other.hamiltonian,
            other.ownership,
        ):
            return False
        if len(self.matrices) != len(other.matrices) or len(self.vectors) != len(other.vectors):
            return False
        arrays = zip(self.matrices + self.vectors, other.matrices + other.vectors)
        if not all(x.shape == y.shape and np.allclose(x, y, rtol=0, atol=tol) for x, y in arrays):
            return False
        return _plain(self.params) == _plain(other.params) and _plain(self.metadata) == _plain(other.metadata)


def _encode_array(a: np.ndarray) -> dict:
    a = np.asarray(a)
    out = {"shape": list(a.shape), "re": a.real.reshape(-1).tolist()}
    if np.iscomplexobj(a) and np.any(a.imag != 0):
        out["im"] = a.imag.reshape(-1).tolist()
    return out


def _decode_array(d: dict) -> np.ndarray:
    re = np.asarray(d["re"], dtype=float)
    a = re + 1j * np.asarray(d["im"], dtype=float) if "im" in d else re
    return a.reshape(d["shape"])


def _plain(obj):
    """Convert numpy containers to JSON-native values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_plain(v) for v in items]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def solution_distribution(A, b) -> np.ndarray:
    x = pseudoinverse(A) @ as_vector(b)
    p = np.abs(x) ** 2
    s = p.sum()
    if s == 0:
        raise DegenerateInputError("A^+ b is zero")
    return p / s


def analyze(A, b) -> dict:
    """kappa, gamma and the measurement distribution of |A^+ b>."""
    dec = svd(A)
    st = spectrum_stats(A, b, dec=dec)
    x = pseudoinverse_from(dec) @ as_vector(b)
    p = np.abs(x) ** 2
    if p.sum() == 0:
        raise DegenerateInputError("A^+ b is zero")
    return {
        "kappa": st.kappa,
        "gamma": st.gamma,
        "op_norm": st.op_norm,
        "frob_norm": st.frob_norm,
        "min_nonzero_sv": st.min_nonzero_sv,
        "expected_distribution": (p / p.sum()).tolist(),
    }


def recompute_metadata(inst: Instance) -> dict:
    if inst.hamiltonian:
        return hamiltonian_metadata(inst.matrices, inst.b, inst.params.get("t", 1.0))
    return analyze(inst.A, inst.b)


def _subset(name: str, s: Iterable[int], size: int) -> frozenset[int]:
    out = frozenset(int(i) for i in s)
    if any(i < 0 or i >= size for i in out):
        raise ContractError(f"{name} has indices outside [0, {size})")
    return out


def _two_party(kind, A, b, params, extra) -> Instance:
    meta = analyze(A, b)
    meta.update(extra)
    return Instance(kind, [A], [b], "single", {"A": ALICE, "b": BOB}, params, meta)


def disjointness_regression(S, T, l: int, n: int | None = None, eps: float | None = None) -> Instance:
    """Diagonal instance whose solution concentrates on S & T when it is nonempty.

    A is 1 on S, 1/eps on the rest of [l] and 0 beyond; b is 1 on T, eps on
    the rest of [l]. ``eps`` defaults to 1/sqrt(l).
    """
    n = l if n is None else n
    if l > n or l < 2:
        raise ContractError("need 2 <= l <= n")
    S, T = _subset("S", S, l), _subset("T", T, l)
    if not S or not T:
        raise DegenerateInputError("S and T must be nonempty")
    if len(S) == l or len(T) == l:
        raise ContractError("S and T must be proper subsets of [l]")
    e = 1 / np.sqrt(l) if eps is None else float(eps)
    a = np.zeros(n)
    bv = np.zeros(n)
    for i in range(l):
        a[i] = 1.0 if i in S else 1 / e
        bv[i] = 1.0 if i in T else e
    inter = sorted(S & T)
    sym = len(S ^ T)
    rest = l - len(S | T)
    L = len(inter) + e**2 * sym + e**4 * rest
    extra = {
        "intersection": inter,
        "intersection_mass": len(inter) / L,
        "kappa_formula": 1 / e,
    }
    return _two_party("disjointness", np.diag(a), bv, {"S": S, "T": T, "l": l, "n": n, "eps": e}, extra)


def gamma_regression(S, T, n: int) -> Instance:
    """(n+1)-dim projector instance; index n is the always-present marker."""
    S, T = _subset("S", S, n), _subset("T", T, n)
    if not T:
        raise DegenerateInputError("T must be nonempty")
    inter = sorted(S & T)
    if len(inter) > 1:
        raise ContractError("gamma_regression needs |S & T| <= 1")
    a = np.zeros(n + 1)
    bv = np.zeros(n + 1)
    a[list(S) + [n]] = 1.0
    bv[list(T) + [n]] = 1.0
    extra = {
        "intersection": inter,
        "intersection_mass": 0.5 if inter else 0.0,
        "gamma_formula": float(np.sqrt((len(inter) + 1) / (len(T) + 1))),
    }
    return _two_party("gamma", np.diag(a), bv, {"S": S, "T": T, "n": n}, extra)


def scaled_disjointness_regression(S, T, n: int, eps: float | None = None) -> Instance:
    """Full-rank diagonal variant: sqrt(eps) on S, 1/sqrt(eps) off S; eps = 1/sqrt(n)."""
    S, T = _subset("S", S, n), _subset("T", T, n)
    if not S or not T:
        raise DegenerateInputError("S and T must be nonempty")
    e = 1 / np.sqrt(n) if eps is None else float(eps)
    a = np.array([np.sqrt(e) if i in S else 1 / np.sqrt(e) for i in range(n)])
    bv = np.array([1 / np.sqrt(e) if i in T else np.sqrt(e) for i in range(n)])
    x = bv / a
    ratio = np.max(1 / a) ** 2 * (bv @ bv) / (x @ x)
    inter = sorted(S & T)
    extra = {
        "intersection": inter,
        "intersection_mass": float(np.sum(x[inter] ** 2) / (x @ x)),
        "cost_ratio": float(ratio),
        "cost_ratio_formula": len(T) / max(1, len(inter)),
    }
    return _two_party("scaled_disjointness", np.diag(a), bv, {"S": S, "T": T, "n": n, "eps": e}, extra)


def permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    """P with P e_j = e_{perm[j]}."""
    perm = [int(p) for p in perm]
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ContractError(f"{perm} is not a permutation of range({n})")
    P = np.zeros((n, n))
    P[perm, np.arange(n)] = 1.0
    return P


def permutation_index_instance(perm: Sequence[int], j: int) -> Instance:
    """Solution state is P e_j: the regression matrix is P^T = P^{-1}."""
    P = permutation_matrix(perm)
    n = P.shape[0]
    if not 0 <= j < n:
        raise ContractError(f"index {j} outside [0, {n})")
    b = np.zeros(n)
    b[j] = 1.0
    target = int(perm[j])
    return _two_party("permutation_index", P.T, b, {"perm": list(map(int, perm)), "j": j}, {"answer": target})


def index_pauli_instance(x: Sequence[int], j: int) -> Instance:
    """2n-dim block-diagonal permutation; block k is I if x_k = 1 else X.

    Basis index of |c>|k> is 2k + c, so the outcome parity reveals x_j.
    """
    x = [int(v) for v in x]
    if any(v not in (0, 1) for v in x):
        raise ContractError("x must be a bitstring")
    n = len(x)
    if not 0 <= j < n:
        raise ContractError(f"index {j} outside [0, {n})")
    X = np.array([[0.0, 1.0], [1.0, 0.0]])
    U = np.zeros((2 * n, 2 * n))
    for k, bit in enumerate(x):
        U[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = np.eye(2) if bit else X
    b = np.zeros(2 * n)
    b[2 * j] = 1.0
    return _two_party("index_pauli", U, b, {"x": x, "j": j}, {"answer": 2 * j + (1 - x[j]), "bit": x[j]})


def appendixA_index_regression(bits, i: int, j: int, eps: float | None = None) -> Instance:
    """Stacked-diagonal (m n) x m instance hiding bit (i, j) of a 0/1 matrix.

    Block k is diag(1/sqrt(eps) where column k has a 1, sqrt(eps) otherwise);
    b is nonzero only in block j and peaks at row i. eps defaults to 1/sqrt(m).
    """
    B = np.asarray(bits, dtype=int)
    if B.ndim != 2 or not np.isin(B, (0, 1)).all():
        raise ContractError("bits must be a 0/1 matrix")
    m, n = B.shape
    if not (0 <= i < m and 0 <= j < n):
        raise ContractError("index out of range")
    e = 1 / np.sqrt(m) if eps is None else float(eps)
    hi, lo = 1 / np.sqrt(e), np.sqrt(e)
    blocks = [np.diag(np.where(B[:, k] == 1, hi, lo)) for k in range(n)]
    D = np.vstack(blocks)
    bj = np.full(m, lo)
    bj[i] = hi
    b = np.zeros(m * n)
    b[j * m : (j + 1) * m] = bj
    d = sum(np.diag(Dk) ** 2 for Dk in blocks)
    x = np.diag(blocks[j]) * bj / d
    pinv_frob2 = float(sum(np.sum((np.diag(Dk) / d) ** 2) for Dk in blocks))
    warn = bool(
        (B.sum(axis=0) == 0).any() or (B.sum(axis=0) == m).any() or (B.sum(axis=1) == 0).any() or (B.sum(axis=1) == n).any()
    )
    meta = analyze(D, b)
    meta.update(
        {
            "answer": int(B[i, j]),
            "mass_at_i": float(x[i] ** 2 / (x @ x)),
            "cost_ratio": pinv_frob2 * float(b @ b) / float(x @ x),
            "cost_ratio_formula": m * n,
            "density_warning": warn,
        }
    )
    return Instance(
        "appendixA_index",
        [D],
        [b],
        "single",
        {"A": ALICE, "b": BOB},
        {"bits": B.tolist(), "i": i, "j": j, "eps": e},
        meta,
    )


def _pm1_table(f, name: str) -> tuple[np.ndarray, int]:
    f = np.asarray(f, dtype=float).reshape(-1)
    d = int(round(np.log2(f.size))) if f.size else -1
    if f.size < 2 or 2**d != f.size:
        raise ContractError(f"{name} must have length 2^d with d >= 1, got {f.size}")
    if not np.isin(f, (-1.0, 1.0)).all():
        raise ContractError(f"{name} must take values +-1")
    return f, d


def hadamard_transform(d: int) -> np.ndarray:
    H = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2)
    out = np.ones((1, 1))
    for _ in range(d):
        out = np.kron(out, H)
    return out


def fourier_coefficient_distribution(f, g) -> np.ndarray:
    """Brute-force squared Fourier coefficients of the product f g."""
    f, d = _pm1_table(f, "f")
    g, _ = _pm1_table(g, "g")
    N = 2**d
    xs = np.arange(N)
    out = np.empty(N)
    for s in range(N):
        signs = np.array([(-1) ** bin(s & x).count("1") for x in xs])
        out[s] = (np.sum(f * g * signs) / N) ** 2
    return out


def fourier_sampling_instance(f, g) -> Instance:
    """Regression matrix D_f H^{(x)d}, so the solution is H^{(x)d} D_f |g>."""
    f, d = _pm1_table(f, "f")
    g, dg = _pm1_table(g, "g")
    if dg != d:
        raise ContractError("f and g must have the same length")
    A = np.diag(f) @ hadamard_transform(d)
    b = g / np.sqrt(2**d)
    extra = {"fourier_distribution": fourier_coefficient_distribution(f, g).tolist()}
    return _two_party("fourier_sampling", A, b, {"f": f.tolist(), "g": g.tolist(), "d": d}, extra)


def multiparty_regression(sets: Sequence[Iterable[int]], n: int, eps=None, xi=None, eta=None) -> Instance:
    """Party 0 holds diag(1 on T_0, 1/eps off), parties j >= 1 hold xi I and b_j.

    Defaults: eps = 1/sqrt(n), xi = 1/sqrt(r), eta = 1/(sqrt(n) r).
    """
    r = len(sets)
    if r < 2:
        raise ContractError("need at least two parties")
    if r * r > n:
        raise ContractError(f"r = {r} violates r^2 <= n = {n}")
    Ts = [_subset(f"T_{k}", s, n) for k, s in enumerate(sets)]
    e = 1 / np.sqrt(n) if eps is None else float(eps)
    xi_ = 1 / np.sqrt(r) if xi is None else float(xi)
    eta_ = 1 / (np.sqrt(n) * r) if eta is None else float(eta)
    D = np.diag([1.0 if i in Ts[0] else 1 / e for i in range(n)])
    mats = [D] + [xi_ * np.eye(n) for _ in range(r - 1)]
    vecs = [np.zeros(n)] + [np.array([1.0 if i in T else eta_ for i in range(n)]) for T in Ts[1:]]
    union = frozenset().union(*Ts[1:])
    inter = sorted(Ts[0] & union)
    A = np.vstack(mats)
    b = np.concatenate(vecs)
    meta = analyze(A, b)
    p = np.asarray(meta["expected_distribution"])
    meta.update(
        {
            "intersection": inter,
            "intersection_mass": float(p[inter].sum()),
            "max_mass": float(p.max()),
        }
    )
    owners = {f"A{k}": party_name(k) for k in range(r)} | {f"b{k}": party_name(k) for k in range(r)}
    return Instance(
        "multiparty",
        mats,
        vecs,
        "stack",
        owners,
        {"sets": [sorted(T) for T in Ts], "n": n, "eps": e, "xi": xi_, "eta": eta_},
        meta,
    )


def hadamard_hamiltonian_instance(f, g) -> Instance:
    """H = (pi/2) D_f L D_f with L = sum_k I (x) (I - H_2) (x) I; e^{iH}|g> = D_f H^{(x)d} D_f |g>."""
    f, d = _pm1_table(f, "f")
    g, dg = _pm1_table(g, "g")
    if dg != d:
        raise ContractError("f and g must have the same length")
    H2 = hadamard_transform(1)
    L = np.zeros((2**d, 2**d))
    for k in range(d):
        L += np.kron(np.kron(np.eye(2**k), np.eye(2) - H2), np.eye(2 ** (d - k - 1)))
    Df = np.diag(f)
    H = (np.pi / 2) * Df @ L @ Df
    psi = g / np.sqrt(2**d)
    meta = hamiltonian_metadata([H], psi, 1.0)
    meta["fourier_distribution"] = fourier_coefficient_distribution(f, g).tolist()
    return Instance(
        "hadamard_hamiltonian",
        [H],
        [psi],
        "sum",
        {"H0": ALICE, "psi": BOB},
        {"f": f.tolist(), "g": g.tolist(), "d": d, "t": 1.0},
        meta,
        hamiltonian=True,
    )


def evolve(H_terms: Sequence[np.ndarray], psi, t: float) -> np.ndarray:
    """Exact e^{i (sum H) t} psi via eigendecomposition."""
    H = sum(np.asarray(h, dtype=complex) for h in H_terms)
    if np.abs(H - H.conj().T).max() > 1e-10:
        raise ContractError("Hamiltonian is not Hermitian")
    w, V = np.linalg.eigh(H)
    return V @ (np.exp(1j * w * t) * (V.conj().T @ np.asarray(psi, dtype=complex)))


def hamiltonian_metadata(H_terms, psi, t: float) -> dict:
    out = evolve(H_terms, psi, t)
    p = np.abs(out) ** 2
    return {
        "alpha": float(sum(np.linalg.norm(h, 2) for h in H_terms)),
        "expected_distribution": (p / p.sum()).tolist(),
    }


def sq_counterexample(a, b, variant: int = 1) -> Instance:
    """Rank-2 instances; index 0 is the extra coordinate, bits live on 1..n.

    Variant 1: A = |0><0| + |a><a| / n,  b = |0> + |b>.
    Variant 2: A = |0><0| + |a><a|,      b = |0> / n + |b>.
    """
    a = np.asarray(a, dtype=int).reshape(-1)
    bb = np.asarray(b, dtype=int).reshape(-1)
    if a.size != bb.size or not np.isin(a, (0, 1)).all() or not np.isin(bb, (0, 1)).all():
        raise ContractError("a and b must be bitstrings of equal length")
    if a.sum() == 0 or bb.sum() == 0:
        raise DegenerateInputError("zero hamming weight")
    if variant not in (1, 2):
        raise ContractError("variant must be 1 or 2")
    n = a.size
    e0 = np.zeros(n + 1)
    e0[0] = 1.0
    ka = np.r_[0.0, a / np.linalg.norm(a)]
    kb = np.r_[0.0, bb / np.linalg.norm(bb)]
    if variant == 1:
        A = np.outer(e0, e0) + np.outer(ka, ka) / n
        vec = e0 + kb
    else:
        A = np.outer(e0, e0) + np.outer(ka, ka)
        vec = e0 / n + kb
    inter = sorted(int(k) for k in np.nonzero(a & bb)[0])
    meta = analyze(A, vec)
    p = np.asarray(meta["expected_distribution"])
    meta.update(
        {
            "intersecting": bool(inter),
            "intersection": inter,
            "nonzero_index_mass": float(p[1:].sum()),
            "frob_times_pinv_norm": float(meta["frob_norm"] / meta["min_nonzero_sv"]),
        }
    )
    return Instance(
        "sq_counterexample",
        [A],
        [vec],
        "single",
        {"A": ALICE, "b": BOB},
        {"a": a.tolist(), "b": bb.tolist(), "variant": variant},
        meta,
    )


# Random generators for sweeps and the CLI.


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def random_conditioned(m: int, n: int, kappa: float, rng: np.random.Generator) -> np.ndarray:
    """Real m x n matrix with singular values geometrically spaced in [1/kappa, 1]."""
    if kappa < 1:
        raise ContractError("kappa must be >= 1")
    k = min(m, n)
    s = np.geomspace(1.0, 1.0 / kappa, k) if k > 1 else np.ones(1)
    U = random_orthogonal(m, rng)[:, :k]
    V = random_orthogonal(n, rng)[:, :k]
    return (U * s) @ V.T


def random_two_party(m: int, n: int, kappa: float, seed: int) -> Instance:
    rng = np.random.default_rng(seed)
    A = random_conditioned(m, n, kappa, rng)
    b = rng.standard_normal(m)
    return _two_party("random", A, b, {"m": m, "n": n, "kappa_target": kappa, "seed": seed}, {})


def split_rows(A: np.ndarray, b: np.ndarray, r: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    idx = np.array_split(np.arange(A.shape[0]), r)
    if any(len(ix) == 0 for ix in idx):
        raise ContractError(f"cannot split {A.shape[0]} rows among {r} parties")
    return [A[ix] for ix in idx], [b[ix] for ix in idx]


def random_split_regression(n: int, r: int, kappa: float, seed: int, b=None) -> Instance:
    """n x n matrix with condition number kappa, rows split across r parties."""
    rng = np.random.default_rng(seed)
    A = random_conditioned(n, n, kappa, rng)
    bv = rng.standard_normal(n) if b is None else as_vector(b)
    mats, vecs = split_rows(A, bv, r)
    owners = {f"A{k}": party_name(k) for k in range(r)} | {f"b{k}": party_name(k) for k in range(r)}
    meta = analyze(A, bv)
    return Instance("random_split", mats, vecs, "stack", owners, {"n": n, "r": r, "kappa_target": kappa, "seed": seed}, meta)


def random_sum_regression(n: int, r: int, kappa: float, seed: int) -> Instance:
    """A = sum of r random symmetric pieces; b = sum of r random pieces."""
    rng = np.random.default_rng(seed)
    A = random_conditioned(n, n, kappa, rng)
    A = (A + A.T) / 2
    pieces = [rng.standard_normal((n, n)) * 0.1 for _ in range(r - 1)]
    pieces = [(P + P.T) / 2 for P in pieces]
    mats = [A - sum(pieces, np.zeros((n, n)))] + pieces
    vecs = [rng.standard_normal(n) for _ in range(r)]
    owners = {f"A{k}": party_name(k) for k in range(r)} | {f"b{k}": party_name(k) for k in range(r)}
    inst = Instance("random_sum", mats, vecs, "sum", owners, {"n": n, "r": r, "kappa_target": kappa, "seed": seed})
    inst.metadata = analyze(inst.A, inst.b)
    return inst


def random_hermitian(n: int, rng: np.random.Generator, norm: float = 1.0) -> np.ndarray:
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = (X + X.conj().T) / 2
    return H * (norm / np.linalg.norm(H, 2))


def random_hamiltonian(n: int, r: int, t: float, seed: int, total_norm: float = 2.0) -> Instance:
    rng = np.random.default_rng(seed)
    terms = [random_hermitian(n, rng, total_norm / r) for _ in range(r)]
    psi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    psi /= np.linalg.norm(psi)
    owners = {f"H{k}": party_name(k) for k in range(r)} | {"psi": REFEREE}
    return Instance(
        "random_hamiltonian",
        terms,
        [psi],
        "sum",
        owners,
        {"n": n, "r": r, "t": t, "seed": seed},
        hamiltonian_metadata(terms, psi, t),
        hamiltonian=True,
    )


def all_subsets(n: int, proper_nonempty: bool = True) -> list[frozenset[int]]:
    out = []
    for mask in product((0, 1), repeat=n):
        s = frozenset(i for i, v in enumerate(mask) if v)
        if proper_nonempty and (not s or len(s) == n):
            continue
        out.append(s)
    return out
