"""Chebyshev polynomials, alternating phase sequences and polynomial encodings.

Two execution paths exist for applying a polynomial to a block-encoded
matrix:

* :func:`exact_poly_encoding` builds the unitary dilation of the singular
  value transform directly and charges ``degree`` uses of the base encoding.
  It is the default everywhere.
* :func:`qsp_sequence` with phases from :func:`find_phases` executes the
  alternating sequence literally. Phase finding is only attempted for small
  degrees and failure is reported with :class:`PhaseFindingError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.fft
import scipy.optimize
import scipy.special
from numpy.polynomial import chebyshev as C

from .blockenc import BlockEncoding
from .errors import ContractError, PhaseFindingError
from .linalg import dilation_unitary, sv_function

GRID_POINTS = 1000
PHASE_RESIDUAL_TOL = 1e-6
MAX_QSP_DEGREE = 60

# inverse_poly degree satisfies degree <= INVERSE_POLY_DEGREE_CONSTANT * log(1/eps) / delta
# (natural log) for every delta in (0, 1/2] and eps in (0, 1/2] that the tests sweep.
INVERSE_POLY_DEGREE_CONSTANT = 13.0


def chebyshev_grid(n: int = GRID_POINTS) -> np.ndarray:
    """Chebyshev extreme points on [-1, 1], endpoints included."""
    return np.cos(np.pi * np.arange(n) / (n - 1))


@dataclass(frozen=True, eq=False)
class ChebyshevPoly:
    """Real polynomial ``sum_k c_k T_k(x)`` with a parity tag.

    ``domain`` is the interval on which the sup bound is certified; ``None``
    means the polynomial is used as an algebraic object with no domain check.
    """

    parity: str
    coefficients: np.ndarray
    domain: tuple[float, float] | None = (-1.0, 1.0)
    sup_bound: float = 1.0
    target_error: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ContractError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        c = np.asarray(self.coefficients, dtype=float).reshape(-1)
        if c.size == 0:
            c = np.zeros(1)
        wrong = c[0::2] if self.parity == "odd" else c[1::2]
        scale = max(np.abs(c).max(), 1e-300)
        if np.abs(wrong).max(initial=0.0) > 1e-13 * scale:
            raise ContractError(f"coefficients do not respect {self.parity} parity")
        c = c.copy()
        if self.parity == "odd":
            c[0::2] = 0.0
        else:
            c[1::2] = 0.0
        nz = np.nonzero(c)[0]
        last = nz[-1] if nz.size else 0
        floor = 1 if self.parity == "odd" else 0
        c = c[: max(last, floor) + 1]
        if c.size < floor + 1:
            c = np.pad(c, (0, floor + 1 - c.size))
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        return C.chebval(np.asarray(x, dtype=float), self.coefficients)

    def scaled(self, factor: float) -> "ChebyshevPoly":
        return replace(
            self,
            coefficients=self.coefficients * factor,
            sup_bound=self.sup_bound * abs(factor),
            target_error=self.target_error * abs(factor),
        )

    def grid_sup(self, n: int = GRID_POINTS) -> float:
        return float(np.abs(self(chebyshev_grid(n))).max())

    @classmethod
    def from_power(cls, parity: str, power_coeffs, domain=None) -> "ChebyshevPoly":
        """Build from monomial coefficients (lowest degree first)."""
        cheb = C.poly2cheb(np.asarray(power_coeffs, dtype=float))
        sup = float(np.abs(C.chebval(chebyshev_grid(), cheb)).max())
        return cls(parity, cheb, domain=domain, sup_bound=sup)

    def to_text(self) -> str:
        lines = [
            f"parity {self.parity}",
            f"degree {self.degree}",
            "coefficients " + " ".join(repr(float(c)) for c in self.coefficients),
            "domain " + ("none" if self.domain is None else f"{self.domain[0]!r} {self.domain[1]!r}"),
            f"sup_bound {self.sup_bound!r}",
            f"target_error {self.target_error!r}",
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ChebyshevPoly":
        fields: dict[str, list[str]] = {}
        for raw in text.splitlines():
            raw = raw.strip()
            if not raw or raw.startswith("#"):
                continue
            key, *vals = raw.split()
            fields[key] = vals
        try:
            parity = fields["parity"][0]
            coeffs = np.array([float(v) for v in fields["coefficients"]])
            degree = int(fields["degree"][0])
        except (KeyError, IndexError, ValueError) as exc:
            raise ContractError(f"malformed polynomial text: {exc}") from exc
        if len(coeffs) != degree + 1:
            raise ContractError(f"degree {degree} disagrees with {len(coeffs)} coefficients")
        dom = fields.get("domain", ["-1.0", "1.0"])
        domain = None if dom[0] == "none" else (float(dom[0]), float(dom[1]))
        return cls(
            parity,
            coeffs,
            domain=domain,
            sup_bound=float(fields.get("sup_bound", ["1.0"])[0]),
            target_error=float(fields.get("target_error", ["0.0"])[0]),
        )


@dataclass(frozen=True)
class PhaseSequence:
    phases: np.ndarray
    degree: int

    def __post_init__(self):
        ph = np.asarray(self.phases, dtype=float).reshape(-1)
        if len(ph) != self.degree:
            raise ContractError(f"{len(ph)} phases given for degree {self.degree}")
        object.__setattr__(self, "phases", ph)


def _cheb_coefficients(func, n: int) -> np.ndarray:
    """Chebyshev coefficients of ``func`` from its values at n first-kind nodes."""
    j = np.arange(n)
    x = np.cos(np.pi * (j + 0.5) / n)
    c = scipy.fft.dct(func(x), type=2) / n
    c[0] /= 2
    return c


def _smoothed_inverse(delta: float, b: int, k: float, centre: float):
    """(3 delta / 4) * (1 - (1 - x^2)^b) / x, switched off below ``centre``."""

    def f(x):
        x = np.asarray(x, dtype=float)
        safe = np.where(x == 0, 1.0, x)
        base = -np.expm1(b * np.log1p(-np.minimum(safe**2, 1.0))) / safe
        base = np.where(x == 0, 0.0, base)
        gate = 1.0 - 0.5 * (scipy.special.erf(k * (x + centre)) - scipy.special.erf(k * (x - centre)))
        return 0.75 * delta * base * gate

    return f


def inverse_poly(delta_prime: float, eps: float) -> ChebyshevPoly:
    """Odd polynomial within ``eps`` of ``3 delta' / (4x)`` for ``delta' <= |x| <= 1``
    and bounded by 1 on [-1, 1].

    Construction: the classic approximant ``(1 - (1 - x^2)^b) / x`` is
    multiplied by an erf gate that vanishes on ``|x| < 0.75 delta'`` (this keeps
    the product below 1 near the origin), and the resulting analytic function
    is truncated in the Chebyshev basis as soon as the discarded coefficient
    mass is below ``eps / 4``.
    """
    if not (0 < delta_prime <= 0.5):
        raise ContractError(f"delta' must lie in (0, 1/2], got {delta_prime}")
    if not (0 < eps <= 0.5):
        raise ContractError(f"eps must lie in (0, 1/2], got {eps}")
    d = delta_prime
    b = int(np.ceil(np.log(3.0 / eps) / d**2))
    kd = max(8.0, 4.0 * float(scipy.special.erfcinv(2.0 * eps / 3.0)))
    func = _smoothed_inverse(d, b, kd / d, 0.75 * d)
    n_nodes = 1 << int(np.ceil(np.log2(2 * b + 8 * kd / d + 256)))
    coeffs = _cheb_coefficients(func, n_nodes)
    coeffs[0::2] = 0.0
    tail = np.cumsum(np.abs(coeffs[::-1]))[::-1]
    budget = eps / 4
    degree = next((i for i in range(1, len(coeffs), 2) if i + 1 >= len(coeffs) or tail[i + 1] <= budget), len(coeffs) - 1)
    coeffs = coeffs[: degree + 1]
    poly = ChebyshevPoly("odd", coeffs, domain=(-1.0, 1.0), sup_bound=1.0, target_error=eps, meta={"delta": d})
    err, sup = inverse_poly_certificate(poly, d)
    if err > eps or sup > 1.0:
        raise ContractError(f"inverse_poly certificate failed: err={err:.3e}, sup={sup:.6f}")
    return replace(poly, sup_bound=sup)


def inverse_poly_certificate(poly: ChebyshevPoly, delta: float, n: int = GRID_POINTS) -> tuple[float, float]:
    """(max error on delta <= |x| <= 1, max |P| on [-1, 1]) over Chebyshev grids."""
    x = chebyshev_grid(n)
    sup = float(np.abs(poly(x)).max())
    xs = np.concatenate([x[np.abs(x) >= delta], np.linspace(delta, 1.0, n), -np.linspace(delta, 1.0, n)])
    err = float(np.abs(poly(xs) - 0.75 * delta / xs).max())
    return err, sup


def _solve_r(t: float, eps: float) -> float:
    """Root r > t of eps = (t / r)^r."""
    g = lambda r: r * np.log(t / r) - np.log(eps)
    lo = max(t, 1e-300)
    if g(lo) <= 0:
        return lo
    hi = max(2 * lo, 1.0)
    while g(hi) > 0:
        hi *= 2
    return float(scipy.optimize.brentq(g, lo, hi, xtol=1e-12))


def jacobi_anger_order(t: float, eps: float) -> int:
    return int(np.floor(_solve_r(np.e * abs(t) / 2, 5 * eps / 4) / 2))


def jacobi_anger(t: float, eps: float) -> tuple[ChebyshevPoly, ChebyshevPoly]:
    """Even/odd Chebyshev truncations of cos(tx) and sin(tx)."""
    if not (0 < eps < 1 / np.e):
        raise ContractError(f"eps must lie in (0, 1/e), got {eps}")
    if t == 0:
        return (
            ChebyshevPoly("even", [1.0], sup_bound=1.0, meta={"t": 0.0, "R": 0}),
            ChebyshevPoly("odd", [0.0, 0.0], sup_bound=0.0, meta={"t": 0.0, "R": 0}),
        )
    R = jacobi_anger_order(t, eps)
    x = chebyshev_grid()
    while True:
        k = np.arange(R + 1)
        cos_c = np.zeros(2 * R + 1)
        cos_c[0::2] = 2 * (-1.0) ** k * scipy.special.jv(2 * k, t)
        cos_c[0] = scipy.special.jv(0, t)
        sin_c = np.zeros(2 * R + 2)
        sin_c[1::2] = 2 * (-1.0) ** k * scipy.special.jv(2 * k + 1, t)
        cos_p = ChebyshevPoly("even", cos_c, target_error=eps, meta={"t": t, "R": R})
        sin_p = ChebyshevPoly("odd", sin_c, target_error=eps, meta={"t": t, "R": R})
        err = max(np.abs(cos_p(x) - np.cos(t * x)).max(), np.abs(sin_p(x) - np.sin(t * x)).max())
        if err <= eps:
            break
        R += 1  # safety net; the closed-form order has met the bound in every case tried
    return (
        replace(cos_p, sup_bound=cos_p.grid_sup()),
        replace(sin_p, sup_bound=sin_p.grid_sup()),
    )


def _phase_op(phi: float, proj: np.ndarray) -> np.ndarray:
    eye = np.eye(proj.shape[0])
    return np.exp(1j * phi) * proj + np.exp(-1j * phi) * (eye - proj)


def qsp_sequence(U, proj, proj_tilde, phi: PhaseSequence) -> np.ndarray:
    """Alternating phase modulation sequence ``U_Phi``.

    Phases are 1-indexed as phi_1..phi_n. Odd n:
    ``e^{i phi_1 (2P~-I)} U  prod_j [e^{i phi_2j (2P-I)} U^H e^{i phi_2j+1 (2P~-I)} U]``;
    even n: ``prod_j [e^{i phi_2j-1 (2P-I)} U^H e^{i phi_2j (2P~-I)} U]``.
    The encoded block is ``P~ U_Phi P`` (odd) or ``P U_Phi P`` (even).
    """
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ContractError("U must be square")
    if np.abs(U.conj().T @ U - np.eye(U.shape[0])).max() > 1e-9:
        raise ContractError("U is not unitary")
    P = np.asarray(proj, dtype=complex)
    Pt = np.asarray(proj_tilde, dtype=complex)
    ph = phi.phases
    n = phi.degree
    Ud = U.conj().T
    out = np.eye(U.shape[0], dtype=complex)
    if n % 2 == 1:
        out = _phase_op(ph[0], Pt) @ U
        pairs = [(ph[2 * j - 1], ph[2 * j]) for j in range(1, (n - 1) // 2 + 1)]
    else:
        pairs = [(ph[2 * j - 2], ph[2 * j - 1]) for j in range(1, n // 2 + 1)]
    for a, b in pairs:
        out = out @ _phase_op(a, P) @ Ud @ _phase_op(b, Pt) @ U
    return out


def _signal(x: np.ndarray) -> np.ndarray:
    """Batch of 2x2 reflection signals [[x, s], [s, -x]]."""
    s = np.sqrt(np.clip(1 - x**2, 0, None))
    out = np.empty((len(x), 2, 2))
    out[:, 0, 0] = x
    out[:, 0, 1] = s
    out[:, 1, 0] = s
    out[:, 1, 1] = -x
    return out


def scalar_qsp(phases: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Top-left entry of the phase sequence on the 2x2 reflection signal, batched over x."""
    phases = np.asarray(phases, dtype=float)
    n = len(phases)
    W = _signal(np.asarray(x, dtype=float)).astype(complex)
    Z = lambda a: np.array([np.exp(1j * a), np.exp(-1j * a)])
    out = np.broadcast_to(np.eye(2, dtype=complex), W.shape).copy()
    if n % 2 == 1:
        out = Z(phases[0])[None, :, None] * W
        pairs = [(phases[2 * j - 1], phases[2 * j]) for j in range(1, (n - 1) // 2 + 1)]
    else:
        pairs = [(phases[2 * j - 2], phases[2 * j - 1]) for j in range(1, n // 2 + 1)]
    for a, b in pairs:
        step = (Z(a)[None, :, None] * W) @ (Z(b)[None, :, None] * W)
        out = out @ step
    return out[:, 0, 0]


def find_phases(
    poly: ChebyshevPoly, *, seed: int = 0, starts: int = 12, nodes: int = 64
) -> PhaseSequence:
    """Phases whose scalar sequence reproduces ``poly`` at Chebyshev nodes.

    Damped least squares (Levenberg-Marquardt) from several seeded starting
    points. Raises PhaseFindingError when no start reaches the 1e-6 residual.
    """
    n = poly.degree
    if n < 1:
        raise PhaseFindingError("degree-0 polynomials have no phase sequence", np.inf)
    if n > MAX_QSP_DEGREE:
        raise PhaseFindingError(f"degree {n} exceeds {MAX_QSP_DEGREE}; use exact_poly_encoding", np.inf)
    if poly.grid_sup() > 1 + 1e-9:
        raise ContractError("polynomial exceeds 1 on [-1, 1]")
    x = np.cos(np.pi * (np.arange(nodes) + 0.5) / nodes)
    target = poly(x)

    def resid(ph):
        d = scalar_qsp(ph, x) - target
        return np.concatenate([d.real, d.imag])

    rng = np.random.default_rng(seed)
    guesses = [np.r_[(1 - n) * np.pi / 2, np.full(n - 1, np.pi / 2)], np.zeros(n)]
    guesses += [rng.uniform(-np.pi, np.pi, n) for _ in range(max(0, starts - 2))]
    best = np.inf
    for g in guesses:
        sol = scipy.optimize.least_squares(resid, g, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=4000 * n)
        res = float(np.abs(resid(sol.x)).max())
        best = min(best, res)
        if res <= PHASE_RESIDUAL_TOL:
            return PhaseSequence(np.mod(sol.x + np.pi, 2 * np.pi) - np.pi, n)
    raise PhaseFindingError(f"phase finding stalled at residual {best:.3e}", best)


def _projector(dim: int, index: np.ndarray) -> np.ndarray:
    P = np.zeros((dim, dim))
    P[index, index] = 1.0
    return P


def qsvt_encoding(be: BlockEncoding, poly: ChebyshevPoly, phases: PhaseSequence | None = None) -> BlockEncoding:
    """Run the alternating sequence on ``be`` with the given (or found) phases."""
    phases = find_phases(poly) if phases is None else phases
    P = _projector(be.dim, be.col_index)
    Pt = _projector(be.dim, be.row_index)
    W = qsp_sequence(be.unitary, P, Pt, phases)
    rows = be.row_index if phases.degree % 2 == 1 else be.col_index
    return BlockEncoding(
        unitary=W,
        alpha=1.0,
        ancilla_qubits=be.ancilla_qubits + 1,
        error=0.0,
        row_index=rows.copy(),
        col_index=be.col_index.copy(),
        use_cost=be.use_cost.scaled(phases.degree),
        label=f"qsp[{phases.degree}]({be.label})",
    )


def exact_poly_encoding(be: BlockEncoding, poly: ChebyshevPoly) -> BlockEncoding:
    """(1, q + 2, 0) encoding of ``poly^(SV)(A / alpha)`` built directly.

    The unitary is the dilation of the transformed block, which exists since
    the transform has norm at most 1/2. The communication descriptor is
    ``degree`` uses of ``be``, matching an alternating sequence of the same
    degree.
    """
    sup = poly.grid_sup()
    if sup > 0.5 + 1e-12:
        raise ContractError(f"exact_poly_encoding needs |poly| <= 1/2 on [-1, 1], got {sup:.6f}")
    M = sv_function(be.block(), poly)
    U = dilation_unitary(M)
    return BlockEncoding(
        unitary=U,
        alpha=1.0,
        ancilla_qubits=be.ancilla_qubits + 2,
        error=0.0,
        row_index=np.arange(M.shape[0]),
        col_index=np.arange(M.shape[1]),
        use_cost=be.use_cost.scaled(poly.degree),
        label=f"poly[{poly.degree}]({be.label})",
    )
