"""Hamiltonians of the two-beam gate, its reduced models, and the toy gate.

Two routes exist for the gate Hamiltonian:

* :func:`exact_hamiltonian` / :func:`perturbative_hamiltonian` build H(t) at a
  single time directly from the displacement factor.
* :func:`gate_hamiltonian` returns a :class:`FourierHamiltonian`, i.e. the same
  operator written as ``sum_j exp(i w_j t) C_j`` with constant ``C_j``. This is
  what the integrator consumes.

The Fourier form rests on ``M(t) = R(t) M(0) R(t)^dagger`` with
``R(t) = exp(i nu t a^dagger a)``, which holds exactly on the truncated space,
so every phonon factor f(M(t)) splits into diagonal bands of f(M(0)) carrying
``exp(i k nu t)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    I2,
    SIGMA_MINUS,
    SIGMA_PLUS,
    GateParams,
    annihilation,
    basis_index,
    ion_operator,
)

ORDERS = (0, 1, 2, "exact")


@dataclass(frozen=True, eq=False)
class FourierHamiltonian:
    """H(t) = sum_j exp(1j * freqs[j] * t) * mats[j]."""

    freqs: np.ndarray
    mats: np.ndarray
    label: str = ""

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=float).reshape(-1)
        mats = np.asarray(self.mats, dtype=complex)
        if mats.ndim != 3 or mats.shape[0] != freqs.size or mats.shape[1] != mats.shape[2]:
            raise ValueError(f"mats must have shape (J, D, D) with J={freqs.size}, got {mats.shape}")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "mats", mats)

    @classmethod
    def constant(cls, H, label="constant") -> "FourierHamiltonian":
        H = np.asarray(H, dtype=complex)
        return cls(np.zeros(1), H[None, :, :], label)

    @property
    def dim(self) -> int:
        return self.mats.shape[1]

    def __call__(self, t: float) -> np.ndarray:
        return np.tensordot(np.exp(1j * self.freqs * t), self.mats, axes=1)

    def sparse(self, tol: float = 0.0):
        """COO triplets ``(rows, cols, vals, fidx)`` of all nonzero entries."""
        j, r, c = np.nonzero(np.abs(self.mats) > tol)
        return (r.astype(np.int64), c.astype(np.int64),
                self.mats[j, r, c].astype(complex), j.astype(np.int64))


def _position_operator(N: int, t: float, nu: float) -> np.ndarray:
    a = annihilation(N)
    return a * np.exp(-1j * nu * t) + a.conj().T * np.exp(1j * nu * t)


def _check_order(order):
    if order not in ORDERS:
        raise ValueError(f"order must be one of {ORDERS}, got {order!r}")


def phonon_factor(eta: float, M: np.ndarray, order) -> np.ndarray:
    """exp(i eta M) exactly, or its Taylor polynomial to the given order."""
    _check_order(order)
    N = M.shape[0]
    if order == "exact":
        w, V = np.linalg.eigh(M)
        return (V * np.exp(1j * eta * w)) @ V.conj().T
    P = np.eye(N, dtype=complex)
    if order >= 1:
        P = P + 1j * eta * M
    if order >= 2:
        P = P - 0.5 * eta**2 * (M @ M)
    return P


def _assemble(p: GateParams, P: np.ndarray, t: float) -> np.ndarray:
    up_a = ion_operator(SIGMA_PLUS, I2, P) * np.exp(1j * p.detuning * t)
    up_b = ion_operator(I2, SIGMA_PLUS, P) * np.exp(-1j * p.detuning * t)
    H = p.omega * (up_a + up_b)
    return H + H.conj().T


def exact_hamiltonian(p: GateParams, t: float) -> np.ndarray:
    """Full two-beam Hamiltonian at time t on the truncated space.

    The displacement factor exp(i eta M(t)) is formed from the eigensystem of
    the truncated Hermitian M(t), so it is exactly unitary on the truncation.
    """
    M = _position_operator(p.phonon_dim, t, p.nu)
    return _assemble(p, phonon_factor(p.eta, M, "exact"), t)


def perturbative_hamiltonian(p: GateParams, t: float, order: int = 2) -> np.ndarray:
    """Hamiltonian expanded to ``order`` (0, 1 or 2) in the Lamb-Dicke parameter.

    Powers of the phonon position operator are products of the truncated
    ladder matrices.
    """
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order!r}")
    M = _position_operator(p.phonon_dim, t, p.nu)
    return _assemble(p, phonon_factor(p.eta, M, order), t)


def gate_hamiltonian(p: GateParams, order=2) -> FourierHamiltonian:
    """Fourier-decomposed gate Hamiltonian for the integrator."""
    _check_order(order)
    N = p.phonon_dim
    P0 = phonon_factor(p.eta, _position_operator(N, 0.0, p.nu), order)
    terms: dict[tuple[int, int], np.ndarray] = {}

    def add(key, mat):
        if np.any(mat):
            terms[key] = terms.get(key, 0) + mat

    for k in range(-(N - 1), N):
        band = np.diag(np.diag(P0, -k), -k)
        if not np.any(band):
            continue
        # row m, col n carries exp(i (m - n) nu t); np.diag(.., -k) puts m - n = k
        for sign, up in ((+1, ion_operator(SIGMA_PLUS, I2, band)),
                         (-1, ion_operator(I2, SIGMA_PLUS, band))):
            add((k, sign), p.omega * up)
            add((-k, -sign), p.omega * up.conj().T)
    keys = sorted(terms)
    freqs = np.array([k * p.nu + s * p.detuning for k, s in keys])
    mats = np.array([terms[key] for key in keys])
    return FourierHamiltonian(freqs, mats, label=f"gate[order={order}]")


def handcoded_rhs(p: GateParams, t: float, c) -> np.ndarray:
    """Time derivative of the eight amplitudes (a, b, ..., h), hand-coded.

    Written out term by term for the second-order model on a two-level
    phonon truncation; shares no code with the matrix builders. The
    variables a..h are the amplitudes of |g g 0>, |g g 1>, |g e 0>, |g e 1>,
    |e g 0>, |e g 1>, |e e 0>, |e e 1> in that order.
    """
    c = np.asarray(c, dtype=complex)
    if c.shape != (8,):
        raise ValueError(f"expected 8 amplitudes, got shape {c.shape}")
    a, b, cc, d, e, f, g, h = c
    eta, nu, dnu = p.eta, p.nu, p.dnu
    q = -0.5 * (eta**2 - 2)
    ie = 1j * eta
    ep = np.exp(1j * (nu + dnu) * t)
    em = np.conj(ep)
    e2p = np.exp(1j * (2 * nu + dnu) * t)
    e2m = np.conj(e2p)
    edp = np.exp(1j * dnu * t)
    edm = np.conj(edp)

    rhs = np.array([
        q * ep * cc - ie * edp * d + q * em * e - ie * e2m * f,
        -ie * e2p * cc + q * ep * d - ie * edm * e + q * em * f,
        q * em * a + ie * e2m * b + q * em * g - ie * e2m * h,
        ie * edm * a + q * em * b - ie * edm * g + q * em * h,
        q * ep * a + ie * edp * b + q * ep * g - ie * edp * h,
        ie * e2p * a + q * ep * b - ie * e2p * g + q * ep * h,
        q * ep * cc + ie * edp * d + q * em * e + ie * e2m * f,
        ie * e2p * cc + q * ep * d + ie * edm * e + q * em * f,
    ])
    # rows above are i * cdot / Omega
    return -1j * p.omega * rhs


@dataclass(frozen=True, eq=False)
class ReducedSystem:
    """Affine system ``dc/dt = A c + b`` with initial value ``c0``."""

    A: np.ndarray
    b: np.ndarray
    c0: np.ndarray
    label: str = ""
    variables: tuple = field(default=())

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        c0 = np.asarray(self.c0, dtype=complex)
        n = A.shape[0]
        if A.shape != (n, n) or b.shape != (n,) or c0.shape != (n,):
            raise ValueError(f"inconsistent shapes A{A.shape} b{b.shape} c0{c0.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c0", c0)

    @property
    def size(self) -> int:
        return self.A.shape[0]


def reduced3(p: GateParams) -> ReducedSystem:
    """Three-variable model (c0, x~, c3~) for the initial state |g g 0>."""
    W, eta, nu, dnu = p.omega, p.eta, p.nu, p.dnu
    A = np.array([
        [0, 0, -eta * W],
        [0, -1j * nu, -1j * W],
        [2 * eta * W, -2j * W, 1j * dnu],
    ], dtype=complex)
    b = np.array([0, 0, -eta * W], dtype=complex)
    return ReducedSystem(A, b, np.array([1, 0, 0], dtype=complex), "reduced3",
                         ("c0", "x~", "c3~"))


def reduced5(p: GateParams, n: int) -> ReducedSystem:
    """Five-variable model (x~, c1, y~, c5~, c6~) for |g g n>, n >= 1.

    The diagonal detuning entries are ``dnu``, the only detuning offset in
    the model.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"reduced5 needs n >= 1 (use reduced3 for n = 0), got {n}")
    W, eta, nu, dnu = p.omega, p.eta, p.nu, p.dnu
    r1, r0 = np.sqrt(n + 1), np.sqrt(n)
    A = np.array([
        [1j * nu, 0, 0, 0, -2j * W],
        [0, 0, 0, 2 * r1 * eta * W, 2 * r0 * eta * W],
        [0, 0, -1j * nu, -2j * W, 0],
        [0, -r1 * eta * W, -1j * W, 1j * dnu, 0],
        [-1j * W, -r0 * eta * W, 0, 0, -1j * dnu],
    ], dtype=complex)
    b = np.array([0, 0, 0, -1j * W * r1 * eta, -1j * W * r0 * eta], dtype=complex)
    return ReducedSystem(A, b, np.array([0, 1, 0, 0, 0], dtype=complex), f"reduced5[n={n}]",
                         ("x~", "c1", "y~", "c5~", "c6~"))


@dataclass(frozen=True)
class ToyParams:
    """Toy gate couplings: ``alpha = eta * Omega`` and ratio ``kappa``."""

    alpha: float = 1.0
    kappa: float = np.sqrt(2.0) - 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if not self.kappa > 0:
            raise ValueError(f"kappa must be > 0, got {self.kappa}")


def toy_full_hamiltonian(tp: ToyParams, N: int) -> np.ndarray:
    """Toy-gate Hamiltonian on the truncated 4N-dimensional space."""
    a = annihilation(N)
    ad = a.conj().T
    HA = 1j * tp.alpha * (ion_operator(SIGMA_PLUS, I2, a) - ion_operator(SIGMA_MINUS, I2, ad))
    HB = 1j * tp.alpha * (ion_operator(I2, SIGMA_PLUS, ad) - ion_operator(I2, SIGMA_MINUS, a))
    return HA + tp.kappa * HB


def toy_subspace(n: int) -> list[tuple[str, str, int]]:
    """Invariant subspace reached from |g g n> under the toy Hamiltonian."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return [("g", "g", 0), ("e", "e", 0), ("g", "e", 1)]
    return [("g", "g", n), ("e", "g", n - 1), ("g", "e", n + 1), ("e", "e", n)]


def toy_hamiltonian(tp: ToyParams, n: int = 0) -> np.ndarray:
    """Toy gate restricted to the subspace of :func:`toy_subspace`.

    For n = 0 this is the 3x3 matrix on (|gg0>, |ee0>, |ge1>); for n >= 1 it
    is 4x4 on (|gg n>, |eg n-1>, |ge n+1>, |ee n>). The subspace is closed
    under H, so no truncation error enters.
    """
    N = n + 2
    idx = [basis_index(a, b, m, N) for a, b, m in toy_subspace(n)]
    H = toy_full_hamiltonian(tp, N)
    return H[np.ix_(idx, idx)]
