"""Dense small-matrix numerics.

SVD with a residual certificate, pseudoinverse, unitary dilation, singular
value functions and the two scalars every protocol reports: the condition
number ``kappa`` and the column-space overlap ``gamma = |A A^+ b| / |b|``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

import numpy as np
import scipy.linalg

from .errors import ContractError, DegenerateInputError, NumericalFailureError

EPS = np.finfo(float).eps
SVD_RESIDUAL_TOL = 1e-10


class ParityTagged(Protocol):
    parity: str
    domain: tuple[float, float] | None

    def __call__(self, x: np.ndarray) -> np.ndarray: ...


def as_matrix(A) -> np.ndarray:
    """Coerce to a finite 2-D float or complex array."""
    M = np.asarray(A)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    elif M.ndim == 1:
        M = M.reshape(-1, 1)
    if M.ndim != 2 or M.size == 0:
        raise ContractError(f"expected a non-empty matrix, got shape {M.shape}")
    if not np.iscomplexobj(M):
        M = M.astype(float)
    else:
        M = M.astype(complex)
    if not np.all(np.isfinite(M)):
        raise ContractError("matrix has non-finite entries")
    return M


def as_vector(b) -> np.ndarray:
    v = np.asarray(b)
    v = v.astype(complex) if np.iscomplexobj(v) else v.astype(float)
    v = v.reshape(-1)
    if v.size == 0 or not np.all(np.isfinite(v)):
        raise ContractError("expected a non-empty finite vector")
    return v


def normalize(v: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise DegenerateInputError("cannot normalise the zero vector")
    return v / nrm


def default_rank_tol(shape: tuple[int, int], sigma_max: float) -> float:
    return max(shape) * EPS * sigma_max


@dataclass(frozen=True)
class Svd:
    """Full SVD ``A = U diag(s) V^H``.

    ``left_vectors`` is m x m, ``right_vectors`` is n x n (columns are the
    singular vectors) and ``singular_values`` has length min(m, n).
    """

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray
    rank_tol: float

    @property
    def shape(self) -> tuple[int, int]:
        return self.left_vectors.shape[0], self.right_vectors.shape[0]

    @property
    def rank(self) -> int:
        return int(np.sum(self.singular_values > self.rank_tol))

    def reconstruct(self) -> np.ndarray:
        m, n = self.shape
        k = len(self.singular_values)
        S = np.zeros((m, n))
        S[:k, :k] = np.diag(self.singular_values)
        return self.left_vectors @ S @ self.right_vectors.conj().T


def _certify(A: np.ndarray, U: np.ndarray, s: np.ndarray, Vh: np.ndarray) -> float:
    m, n = A.shape
    k = len(s)
    recon = (U[:, :k] * s) @ Vh[:k, :]
    scale = max(float(s[0]) if s.size else 0.0, 1.0)
    worst = np.linalg.norm(A - recon) / scale
    worst = max(worst, np.abs(U.conj().T @ U - np.eye(m)).max())
    worst = max(worst, np.abs(Vh @ Vh.conj().T - np.eye(n)).max())
    if np.any(np.diff(s) > 0) or np.any(s < 0):
        worst = np.inf
    return worst


def svd(A, rank_tol: float | None = None) -> Svd:
    """SVD backed by LAPACK with a reconstruction/orthonormality certificate.

    The divide-and-conquer driver is tried first and the QR-iteration driver
    second; if neither meets the 1e-10 certificate a NumericalFailureError is
    raised.
    """
    M = as_matrix(A)
    worst = np.inf
    for driver in ("gesdd", "gesvd"):
        try:
            U, s, Vh = scipy.linalg.svd(M, full_matrices=True, lapack_driver=driver)
        except (np.linalg.LinAlgError, ValueError):
            continue
        worst = _certify(M, U, s, Vh)
        if worst <= SVD_RESIDUAL_TOL:
            tol = default_rank_tol(M.shape, s[0] if len(s) else 0.0) if rank_tol is None else rank_tol
            return Svd(U, s, Vh.conj().T, float(tol))
    raise NumericalFailureError(f"SVD certificate failed (worst residual {worst:.3e})")


def pseudoinverse(A, rank_tol: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse keeping singular values above ``rank_tol``."""
    if rank_tol is not None and rank_tol < 0:
        raise ContractError("rank_tol must be non-negative")
    return pseudoinverse_from(svd(A, rank_tol))


def pseudoinverse_from(dec: Svd) -> np.ndarray:
    """Pseudoinverse assembled from an existing decomposition."""
    m, n = dec.shape
    keep = dec.singular_values > dec.rank_tol
    k = int(np.sum(keep))
    if k == 0:
        return np.zeros((n, m), dtype=dec.left_vectors.dtype)
    V = dec.right_vectors[:, :k]
    U = dec.left_vectors[:, :k]
    return (V / dec.singular_values[:k]) @ U.conj().T


def unitary_with_first_column(v) -> np.ndarray:
    """Householder completion: a unitary whose first column is the unit vector ``v``."""
    v = normalize(as_vector(v).astype(complex))
    d = v.size
    phase = v[0] / abs(v[0]) if abs(v[0]) > 0 else 1.0
    x = v / phase
    w = x.copy()
    w[0] -= 1.0
    nw = np.vdot(w, w).real
    if nw < 1e-30:
        return phase * np.eye(d, dtype=complex)
    H = np.eye(d, dtype=complex) - 2.0 * np.outer(w, w.conj()) / nw
    return phase * H


def dilation_unitary(M) -> np.ndarray:
    """Unitary ``[[M, U S], [S V^H, -D]]`` for ``M = U D V^H`` with ``|M| <= 1``.

    Non-square inputs are zero-padded to square first, so the result is
    2N x 2N with N = max(rows, cols) and its top-left rows x cols block is M.
    """
    M = as_matrix(M)
    m, n = M.shape
    N = max(m, n)
    P = np.zeros((N, N), dtype=M.dtype)
    P[:m, :n] = M
    dec = svd(P)
    D = dec.singular_values
    if D[0] > 1 + 1e-9:
        raise ContractError(f"dilation needs operator norm <= 1, got {D[0]:.6g}")
    D = np.clip(D, 0.0, 1.0)
    S = np.sqrt(1.0 - D**2)
    U, V = dec.left_vectors, dec.right_vectors
    out = np.zeros((2 * N, 2 * N), dtype=complex if np.iscomplexobj(P) else float)
    out[:N, :N] = P
    out[:N, N:] = U * S
    out[N:, :N] = (V * S).conj().T
    out[N:, N:] = -np.diag(D)
    return out


def unitary_dilation(A):
    """(|A|, 1, 0) block-encoding of ``A``; see :func:`distqla.blockenc.unitary_dilation`."""
    from .blockenc import unitary_dilation as _dilate

    return _dilate(A)


def sv_function(A, f: ParityTagged) -> np.ndarray:
    """Apply ``f`` to the singular values of ``A``.

    Odd ``f`` gives ``sum f(s_i) |u_i><v_i|`` (m x n). Even ``f`` gives
    ``sum_{i<=n} f(s_i) |v_i><v_i|`` (n x n) with s_i = 0 beyond min(m, n).
    """
    parity = getattr(f, "parity", None)
    if parity not in ("even", "odd"):
        raise ContractError(f"function must be tagged 'even' or 'odd', got {parity!r}")
    M = as_matrix(A)
    dec = svd(M)
    m, n = M.shape
    s = dec.singular_values
    domain = getattr(f, "domain", None)
    if domain is not None and len(s) and s[0] > domain[1] + 1e-9:
        raise ContractError(f"singular value {s[0]:.6g} outside certified domain {domain}")
    k = len(s)
    if parity == "odd":
        fs = np.asarray(f(s), dtype=complex)
        out = (dec.left_vectors[:, :k] * fs) @ dec.right_vectors[:, :k].conj().T
    else:
        full = np.zeros(n)
        full[:k] = s
        fs = np.asarray(f(full), dtype=complex)
        V = dec.right_vectors
        out = (V * fs) @ V.conj().T
    if not np.iscomplexobj(M) and np.abs(out.imag).max(initial=0.0) < 1e-14:
        out = out.real
    return out


@dataclass(frozen=True)
class SpectrumStats:
    kappa: float
    gamma: float
    op_norm: float
    frob_norm: float
    min_nonzero_sv: float


def spectrum_stats(A, b, rank_tol: float | None = None, dec: Svd | None = None) -> SpectrumStats:
    M = as_matrix(A)
    v = as_vector(b)
    if v.size != M.shape[0]:
        raise ContractError(f"b has length {v.size}, expected {M.shape[0]}")
    bn = np.linalg.norm(v)
    if bn == 0:
        raise DegenerateInputError("b must be nonzero")
    dec = svd(M, rank_tol) if dec is None else dec
    keep = dec.singular_values > dec.rank_tol
    if not np.any(keep):
        raise DegenerateInputError("A has no singular value above rank_tol")
    s = dec.singular_values[keep]
    U = dec.left_vectors[:, : len(s)]
    proj = U @ (U.conj().T @ v)
    gamma = float(min(1.0, np.linalg.norm(proj) / bn))
    return SpectrumStats(
        kappa=float(s[0] / s[-1]),
        gamma=gamma,
        op_norm=float(s[0]),
        frob_norm=float(np.linalg.norm(M)),
        min_nonzero_sv=float(s[-1]),
    )
