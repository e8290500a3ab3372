"""Basis bookkeeping, parameters and phonon ladder operators.

The Hilbert space is ion A (x) ion B (x) truncated phonon mode. Basis states
are ordered with ion A slowest and the phonon number fastest::

    index = ((a * 2) + b) * N + n,    g -> 0, e -> 1

so for N = 2 the eight states run |g g 0>, |g g 1>, |g e 0>, ..., |e e 1>.
Units are dimensionless with hbar = 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

G, E = 0, 1
_LEVELS = {"g": G, "e": E, 0: G, 1: E}

# Prob(kl) ordering used throughout: gg, ge, eg, ee
ION_LABELS = ("gg", "ge", "eg", "ee")


class MSGateError(Exception):
    """Base class for numerical failures raised by this package."""


def _level(x) -> int:
    try:
        return _LEVELS[x]
    except (KeyError, TypeError):
        raise ValueError(f"ion level must be 'g'/'e' or 0/1, got {x!r}") from None


@dataclass(frozen=True)
class GateParams:
    """Physical parameters of the two-beam gate.

    Parameters
    ----------
    omega : float
        Rabi frequency, shared by both beams.
    eta : float
        Lamb-Dicke parameter.
    nu : float
        Angular frequency of the centre-of-mass phonon mode.
    dnu : float
        Detuning offset; beam A sits at -(nu + dnu), beam B at +(nu + dnu).
    phonon_dim : int
        Number of Fock levels kept for the phonon mode.
    """

    omega: float = 0.1
    eta: float = 0.025
    nu: float = 5.0
    dnu: float = 0.025
    phonon_dim: int = 4

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if not self.nu > 0:
            raise ValueError(f"nu must be > 0, got {self.nu}")
        if not self.dnu > 0:
            raise ValueError(f"dnu must be > 0, got {self.dnu}")
        if not 0 <= self.eta < 0.5:
            raise ValueError(f"eta must lie in [0, 0.5), got {self.eta}")
        if int(self.phonon_dim) != self.phonon_dim or self.phonon_dim < 2:
            raise ValueError(f"phonon_dim must be an integer >= 2, got {self.phonon_dim}")
        object.__setattr__(self, "phonon_dim", int(self.phonon_dim))

    @property
    def detuning(self) -> float:
        """Laser detuning magnitude nu + dnu."""
        return self.nu + self.dnu

    @property
    def dim(self) -> int:
        return 4 * self.phonon_dim

    def replace(self, **changes) -> "GateParams":
        fields = dict(omega=self.omega, eta=self.eta, nu=self.nu, dnu=self.dnu,
                      phonon_dim=self.phonon_dim)
        fields.update(changes)
        return GateParams(**fields)


DEFAULT_PARAMS = GateParams()


def basis_index(a, b, n: int, N: int) -> int:
    """Linear index of |a>_A |b>_B |n>_P in a space with N phonon levels."""
    if not 0 <= n < N:
        raise ValueError(f"phonon number {n} out of range for N={N}")
    return (_level(a) * 2 + _level(b)) * N + n


def basis_unindex(index: int, N: int) -> tuple[int, int, int]:
    """Inverse of :func:`basis_index`; returns (a, b, n) with g=0, e=1."""
    if not 0 <= index < 4 * N:
        raise ValueError(f"index {index} out of range for N={N}")
    ions, n = divmod(index, N)
    a, b = divmod(ions, 2)
    return a, b, n


def basis_state(a, b, n: int, N: int) -> np.ndarray:
    psi = np.zeros(4 * N, dtype=complex)
    psi[basis_index(a, b, n, N)] = 1.0
    return psi


def annihilation(N: int) -> np.ndarray:
    """Truncated phonon annihilation operator, ``a[m, m+1] = sqrt(m+1)``."""
    if N < 2:
        raise ValueError(f"phonon dimension must be >= 2, got {N}")
    return np.diag(np.sqrt(np.arange(1, N, dtype=float)), 1).astype(complex)


def hermiticity_defect(M) -> float:
    """Largest entrywise ``|M - M^dagger|``."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return float(np.max(np.abs(M - M.conj().T), initial=0.0))


# single-ion operators on span{|g>, |e>}
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.T.copy()
I2 = np.eye(2, dtype=complex)


def ion_operator(op_a, op_b, phonon_op) -> np.ndarray:
    """Kronecker product in the canonical A, B, phonon ordering."""
    return np.kron(np.kron(op_a, op_b), phonon_op)


def normalized(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return psi / np.linalg.norm(psi)
