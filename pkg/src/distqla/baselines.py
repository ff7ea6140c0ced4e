"""Classical comparators: full-transfer regression, sample-and-query access and distribution distances."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .comm import ALICE, BOB, MessageLedger, Topology, bits_per_entry, send_classical
from .errors import ContractError, DegenerateInputError
from .linalg import as_matrix, as_vector, pseudoinverse


def tv_distance(p, q) -> float:
    """Total variation distance (1/2) sum |p_i - q_i|."""
    p = np.asarray(p, dtype=float).reshape(-1)
    q = np.asarray(q, dtype=float).reshape(-1)
    if p.shape != q.shape:
        raise ContractError("distributions must have the same support size")
    if (p < 0).any() or (q < 0).any():
        raise ContractError("distributions must be non-negative")
    return 0.5 * float(np.abs(p - q).sum())


def induced_distribution(x) -> np.ndarray:
    """|x_i|^2 / |x|^2."""
    x = as_vector(x)
    p = np.abs(x) ** 2
    s = p.sum()
    if s == 0:
        raise DegenerateInputError("zero vector has no induced distribution")
    return p / s


@dataclass
class ClassicalOutcome:
    protocol: str
    samples: np.ndarray
    distribution: np.ndarray
    exact_distribution: np.ndarray
    ledger: MessageLedger

    @property
    def tv_distance(self) -> float:
        return tv_distance(self.distribution, self.exact_distribution)


def classical_naive_regression(A, b, direction: str = "BtoA", draws: int = 1, seed: int | None = 0) -> ClassicalOutcome:
    """The holder of the smaller object ships it in full; the receiver solves and samples.

    ``direction='BtoA'`` sends b (m entries); ``'AtoB'`` sends A (m n entries).
    Each real entry costs ceil(log2(mn)) bits.
    """
    A = as_matrix(A)
    bv = as_vector(b)
    m, n = A.shape
    if bv.size != m:
        raise ContractError(f"b has length {bv.size}, expected {m}")
    if direction == "BtoA":
        ledger = MessageLedger(Topology("two_party_one_way_BtoA"))
        send_classical(m * bits_per_entry(m, n), BOB, ALICE, ledger, "b in full")
    elif direction == "AtoB":
        ledger = MessageLedger(Topology("two_party_one_way_AtoB"))
        send_classical(m * n * bits_per_entry(m, n), ALICE, BOB, ledger, "A in full")
    else:
        raise ContractError(f"unknown direction {direction!r}")
    exact = induced_distribution(pseudoinverse(A) @ bv)
    rng = np.random.default_rng(seed)
    samples = rng.choice(n, size=int(draws), p=exact)
    return ClassicalOutcome("classical-naive", samples, exact.copy(), exact, ledger)


@dataclass
class SqAccess:
    """Sample-and-query access to a vector or to a matrix through its rows.

    For a matrix, ``sample`` draws a row index by squared row norm and
    ``sample_row(i)`` draws a column within row i.
    """

    data: np.ndarray
    seed: int | None = 0
    entry_queries: int = 0
    norm_queries: int = 0
    samples: int = 0
    rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        self.data = np.asarray(self.data)
        if self.data.ndim not in (1, 2):
            raise ContractError("SQ access needs a vector or a matrix")
        if not np.any(self.data):
            raise DegenerateInputError("SQ access to the zero object")
        self.rng = np.random.default_rng(self.seed)

    @property
    def is_matrix(self) -> bool:
        return self.data.ndim == 2

    def query(self, *index) -> complex:
        self.entry_queries += 1
        return self.data[index]

    def norm(self) -> float:
        self.norm_queries += 1
        return float(np.linalg.norm(self.data))

    def row_norms(self) -> np.ndarray:
        if not self.is_matrix:
            raise ContractError("row norms need a matrix")
        self.norm_queries += 1
        return np.linalg.norm(self.data, axis=1)

    def distribution(self) -> np.ndarray:
        w = np.abs(self.data) ** 2
        if self.is_matrix:
            w = w.sum(axis=1)
        return w / w.sum()

    def sample(self) -> int:
        self.samples += 1
        return int(self.rng.choice(self.distribution().size, p=self.distribution()))

    def sample_many(self, k: int) -> np.ndarray:
        p = self.distribution()
        self.samples += int(k)
        return self.rng.choice(p.size, size=int(k), p=p)

    def sample_row(self, i: int) -> int:
        if not self.is_matrix:
            raise ContractError("row sampling needs a matrix")
        w = np.abs(self.data[i]) ** 2
        if w.sum() == 0:
            raise DegenerateInputError(f"row {i} is zero")
        self.samples += 1
        return int(self.rng.choice(w.size, p=w / w.sum()))


def sq_sample(handle: SqAccess) -> int:
    """Index i with probability |v_i|^2 / |v|^2 (row norms for matrices)."""
    return handle.sample()


@dataclass
class SqDemoReport:
    distribution: np.ndarray
    samples: np.ndarray
    verdict: bool
    truth: bool
    draws: int

    @property
    def correct(self) -> bool:
        return self.verdict == self.truth


def sq_rank2_demo(instance, draws: int | None = None, seed: int | None = 0) -> SqDemoReport:
    """Sample the solution distribution of a rank-2 instance and call "intersecting"
    iff some index other than 0 appears within the draw budget (default 10 n)."""
    if instance.kind != "sq_counterexample":
        raise ContractError("sq_rank2_demo needs an instance from sq_counterexample")
    x = pseudoinverse(instance.A) @ instance.b
    handle = SqAccess(x, seed=seed)
    n = x.size - 1
    budget = 10 * n if draws is None else int(draws)
    samples = handle.sample_many(budget)
    verdict = bool(np.any(samples != 0))
    return SqDemoReport(handle.distribution(), samples, verdict, bool(instance.metadata["intersecting"]), budget)
