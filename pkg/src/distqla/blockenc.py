"""Block-encodings and the LCU combiners used by the protocols.

A :class:`BlockEncoding` stores a unitary together with the index sets that
pick out the encoded block: ``alpha * U[row_index][:, col_index]`` equals
the target matrix. Keeping explicit index sets (rather than assuming the
block sits in the ``|0^q>`` corner) lets stacked and dilated encodings keep
their natural register order (selector, ancilla, data) without permuting.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import ContractError, DegenerateInputError
from .linalg import as_matrix, dilation_unitary, unitary_with_first_column

# Weight given to padding blocks when the number of blocks is not a power of two.
PAD_ALPHA = 1e-30


def qubits_for(dim: int) -> int:
    """Number of qubits needed to hold a ``dim``-dimensional register."""
    return max(0, int(np.ceil(np.log2(dim)))) if dim > 1 else 0


@dataclass(frozen=True)
class UseCost:
    """Communication needed for one use of an encoding.

    ``trips`` lists one (owner, width) pair per round trip: the referee ships
    ``width`` qubits to ``owner`` and receives them back.
    """

    trips: tuple[tuple[str, int], ...] = ()

    @property
    def qubits(self) -> int:
        return 2 * sum(w for _, w in self.trips)

    @property
    def owners(self) -> tuple[str, ...]:
        return tuple(o for o, _ in self.trips)

    @property
    def round_trips(self) -> int:
        return len(self.trips)

    def scaled(self, uses: int) -> "UseCost":
        return UseCost(self.trips * int(uses))

    def __add__(self, other: "UseCost") -> "UseCost":
        return UseCost(self.trips + other.trips)


@dataclass(frozen=True, eq=False)
class BlockEncoding:
    unitary: np.ndarray
    alpha: float
    ancilla_qubits: int
    error: float
    row_index: np.ndarray
    col_index: np.ndarray
    use_cost: UseCost = field(default_factory=UseCost)
    label: str = ""

    @property
    def dim(self) -> int:
        return self.unitary.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_index), len(self.col_index)

    def block(self) -> np.ndarray:
        """The encoded block ``A / alpha``."""
        return self.unitary[np.ix_(self.row_index, self.col_index)]

    def matrix(self) -> np.ndarray:
        return self.alpha * self.block()

    def embed_input(self, x: np.ndarray) -> np.ndarray:
        """Place a data vector on the flagged input subspace."""
        x = np.asarray(x).reshape(-1)
        if x.size != len(self.col_index):
            raise ContractError(f"input has length {x.size}, expected {len(self.col_index)}")
        out = np.zeros(self.dim, dtype=complex)
        out[self.col_index] = x
        return out

    def flagged_output(self, state: np.ndarray) -> np.ndarray:
        return np.asarray(state)[self.row_index]


def verify_block_encoding(be: BlockEncoding, target) -> float:
    """Operator-norm residual ``|target - alpha * block|``."""
    T = as_matrix(target)
    if T.shape != be.shape:
        raise ContractError(f"target shape {T.shape} does not match encoded block {be.shape}")
    return float(np.linalg.norm(T - be.matrix(), 2))


def unitary_dilation(A, owner: str = "alice") -> BlockEncoding:
    """(|A|, 1, 0) block-encoding from the SVD dilation of ``A / |A|``."""
    M = as_matrix(A)
    nrm = float(np.linalg.norm(M, 2))
    if nrm == 0:
        raise DegenerateInputError("cannot block-encode the zero matrix")
    U = dilation_unitary(M / nrm)
    m, n = M.shape
    width = qubits_for(U.shape[0])
    return BlockEncoding(
        unitary=U,
        alpha=nrm,
        ancilla_qubits=1,
        error=0.0,
        row_index=np.arange(m),
        col_index=np.arange(n),
        use_cost=UseCost(((owner, width),)),
        label=f"dilation[{owner}]",
    )


def _check_alphas(encodings: Sequence[BlockEncoding]) -> None:
    if not encodings:
        raise ContractError("need at least one encoding")
    for be in encodings:
        if not be.alpha > 0:
            raise ContractError(f"alpha must be positive, got {be.alpha}")
    dims = {be.dim for be in encodings}
    if len(dims) != 1:
        raise ContractError(f"encodings act on different dimensions {sorted(dims)}")


def _padded(encodings: Sequence[BlockEncoding]) -> tuple[list[np.ndarray], list[float], int]:
    r = len(encodings)
    R = 1 << qubits_for(r)
    D = encodings[0].dim
    unitaries = [be.unitary for be in encodings] + [np.eye(D)] * (R - r)
    weights = [be.alpha for be in encodings] + [PAD_ALPHA] * (R - r)
    return unitaries, weights, R


def _controlled(unitaries: list[np.ndarray]) -> np.ndarray:
    return scipy.linalg.block_diag(*unitaries).astype(complex)


def stack_lcu(encodings: Sequence[BlockEncoding]) -> BlockEncoding:
    """Encode the row stack ``[A_0; A_1; ...]`` with ``alpha = sqrt(sum alpha_i^2)``.

    Registers are ordered (selector, ancilla, data). The selector is prepared
    by ``V|0> = sum_i (alpha_i / alpha) |i>``, then ``U_i`` is applied
    controlled on ``|i>``. The selector value labels the output block row, so
    the swap that moves it next to the data register is a relabelling of
    ``row_index`` rather than an extra permutation.
    """
    _check_alphas(encodings)
    if len(encodings) == 1:
        return encodings[0]
    cols = encodings[0].col_index
    q = encodings[0].ancilla_qubits
    for be in encodings[1:]:
        if not np.array_equal(be.col_index, cols):
            raise ContractError("stack_lcu needs a common column space")
        if be.ancilla_qubits != q:
            raise ContractError("stack_lcu needs a common ancilla count")
    unitaries, weights, R = _padded(encodings)
    alpha = float(np.sqrt(sum(be.alpha**2 for be in encodings)))
    V = unitary_with_first_column(np.asarray(weights) / alpha)
    D = encodings[0].dim
    W = _controlled(unitaries) @ np.kron(V, np.eye(D))
    rows = np.concatenate([i * D + be.row_index for i, be in enumerate(encodings)])
    cost = sum((be.use_cost for be in encodings), UseCost())
    return BlockEncoding(
        unitary=W,
        alpha=alpha,
        ancilla_qubits=q + qubits_for(R),
        error=float(sum(be.error for be in encodings)),
        row_index=rows,
        col_index=cols.copy(),
        use_cost=cost,
        label="stack",
    )


def sum_lcu(encodings: Sequence[BlockEncoding]) -> BlockEncoding:
    """Encode ``A_0 + ... + A_{r-1}`` with ``alpha = sum alpha_i``."""
    _check_alphas(encodings)
    rows, cols = encodings[0].row_index, encodings[0].col_index
    for be in encodings[1:]:
        if not (np.array_equal(be.row_index, rows) and np.array_equal(be.col_index, cols)):
            raise ContractError("sum_lcu needs encodings of the same shape and layout")
    if len(encodings) == 1:
        return encodings[0]
    unitaries, weights, R = _padded(encodings)
    alpha = float(sum(be.alpha for be in encodings))
    V = unitary_with_first_column(np.sqrt(np.asarray(weights) / alpha))
    D = encodings[0].dim
    VI = np.kron(V, np.eye(D))
    W = VI.conj().T @ _controlled(unitaries) @ VI
    cost = sum((be.use_cost for be in encodings), UseCost())
    return BlockEncoding(
        unitary=W,
        alpha=alpha,
        ancilla_qubits=encodings[0].ancilla_qubits + qubits_for(R),
        error=float(sum(be.error for be in encodings)),
        row_index=rows.copy(),
        col_index=cols.copy(),
        use_cost=cost,
        label="sum",
    )


def hermitian_dilation(be: BlockEncoding) -> BlockEncoding:
    """Encode ``[[0, A], [A^H, 0]]`` with the same alpha.

    Built as ``[[0, U], [U^H, 0]]``: one extra control qubit selects U or
    U^H, so every shuttled register grows by that qubit.
    """
    U = be.unitary
    D = be.dim
    W = np.zeros((2 * D, 2 * D), dtype=complex)
    W[:D, D:] = U
    W[D:, :D] = U.conj().T
    idx = np.concatenate([be.row_index, D + be.col_index])
    cost = UseCost(tuple((o, w + 1) for o, w in be.use_cost.trips))
    return replace(
        be,
        unitary=W,
        row_index=idx,
        col_index=idx.copy(),
        use_cost=cost,
        label=f"herm({be.label})",
    )


def encoded_identity(dim: int) -> BlockEncoding:
    """Trivial (1, 0, 0) encoding of the identity, used in tests and padding."""
    return BlockEncoding(
        unitary=np.eye(dim, dtype=complex),
        alpha=1.0,
        ancilla_qubits=0,
        error=0.0,
        row_index=np.arange(dim),
        col_index=np.arange(dim),
    )
