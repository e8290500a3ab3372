"""Thermal phonon ensembles and gate fidelities, including the toy gate."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import GateParams, MSGateError, basis_index, basis_state
from .evolve import TimeGrid, schrodinger_evolve
from .hamiltonians import ToyParams, gate_hamiltonian, toy_hamiltonian, toy_subspace
from .spectral import closed_form_T0

SQRT2 = math.sqrt(2.0)
KAPPA_BALANCED = SQRT2 - 1.0


class NoSolutionError(MSGateError):
    pass


@dataclass(frozen=True)
class ThermalSpec:
    """Thermal phonon distribution with mean occupation ``n_th``.

    Weights are kept for n < ``trunc_dim``. With ``renormalize`` they are
    rescaled to sum to one; otherwise the tail beyond the truncation is
    dropped.
    """

    n_th: float
    trunc_dim: int
    renormalize: bool = False

    def __post_init__(self):
        if not self.n_th >= 0:
            raise ValueError(f"n_th must be >= 0, got {self.n_th}")
        if int(self.trunc_dim) != self.trunc_dim or self.trunc_dim < 1:
            raise ValueError(f"trunc_dim must be a positive integer, got {self.trunc_dim}")

    @property
    def beta_nu(self) -> float:
        """beta * nu, from n_th = 1 / (exp(beta nu) - 1)."""
        return math.inf if self.n_th == 0 else math.log1p(1.0 / self.n_th)


def phonon_weights(spec: ThermalSpec) -> np.ndarray:
    """Bose-Einstein weights ``n_th^n / (1 + n_th)^(n+1)`` for n < trunc_dim."""
    n = np.arange(spec.trunc_dim)
    if spec.n_th == 0:
        w = (n == 0).astype(float)
    else:
        r = spec.n_th / (1.0 + spec.n_th)
        w = (1.0 - r) * r ** n
    if spec.renormalize:
        w = w / w.sum()
    return w


@dataclass(frozen=True, eq=False)
class BellTarget:
    """Target two-ion state as amplitudes over (gg, ge, eg, ee)."""

    amplitudes: np.ndarray
    name: str

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (4,) or abs(np.linalg.norm(amp) - 1) > 1e-12:
            raise ValueError("Bell target must be a normalized 4-vector")
        object.__setattr__(self, "amplitudes", amp)


# (e^{-i pi/4} / sqrt 2)(|gg> + i|ee>), produced at a quarter period
PSI_GATE = BellTarget(np.exp(-1j * math.pi / 4) / SQRT2 * np.array([1, 0, 0, 1j]), "Psi")
PHI_PLUS = BellTarget(np.array([1, 0, 0, 1]) / SQRT2, "Phi+")


def ion_fidelity(psi, target: BellTarget = PSI_GATE) -> float:
    """``<T| Tr_P |psi><psi| |T>`` = sum_m |<T, m|psi>|^2."""
    psi = np.asarray(psi)
    N = psi.size // 4
    proj = target.amplitudes.conj() @ psi.reshape(4, N)
    return float(np.sum(np.abs(proj) ** 2))


def default_gate_time(p: GateParams) -> float:
    """Quarter of the closed-form gate period."""
    return closed_form_T0(p).value / 4


def _evolve_to(p: GateParams, n: int, t_gate: float, order, dt) -> np.ndarray:
    H = gate_hamiltonian(p, order)
    grid = TimeGrid.for_gate(p.nu, t_gate, dt=dt, sample_every=t_gate)
    return schrodinger_evolve(H, basis_state("g", "g", n, p.phonon_dim), grid).final_state


def thermal_overlaps(p: GateParams, t_gate: float | None = None, target: BellTarget = PSI_GATE,
                     order=2, dt: float | None = None, n_values=None, jobs: int = 1) -> np.ndarray:
    """Ion fidelity of the state evolved from |g g n> for each n.

    Returns an array of length ``p.phonon_dim``; entries for n not in
    ``n_values`` are NaN.
    """
    N = p.phonon_dim
    t_gate = default_gate_time(p) if t_gate is None else t_gate
    n_values = range(N) if n_values is None else list(n_values)
    out = np.full(N, np.nan)

    def one(n):
        return n, ion_fidelity(_evolve_to(p, n, t_gate, order, dt), target)

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            results = list(pool.map(one, n_values))
    else:
        results = [one(n) for n in n_values]
    for n, f in results:
        out[n] = f
    return out


def fidelity_vs_nth(p: GateParams, spec: ThermalSpec, t_gate: float | None = None,
                    target: BellTarget = PSI_GATE, order=2, dt: float | None = None,
                    jobs: int = 1, overlaps=None) -> float:
    """Fidelity of the thermal ensemble with the Bell target at ``t_gate``.

    Each |g g n> (n < trunc_dim) is evolved under the second-order
    Hamiltonian (``order`` selects another) and the per-n ion fidelities are
    weighted with :func:`phonon_weights`. ``t_gate`` defaults to a quarter of
    the closed-form period. Precomputed ``overlaps`` from
    :func:`thermal_overlaps` may be passed to reuse runs across n_th values.
    """
    if spec.trunc_dim != p.phonon_dim:
        p = p.replace(phonon_dim=spec.trunc_dim)
    w = phonon_weights(spec)
    if overlaps is None:
        needed = [n for n in range(spec.trunc_dim) if w[n] > 0]
        overlaps = thermal_overlaps(p, t_gate, target, order, dt, needed, jobs)
    overlaps = np.asarray(overlaps, dtype=float)
    mask = w > 0
    return float(w[mask] @ overlaps[mask])


def toy_closed_form(tp: ToyParams, t):
    """Amplitudes (c0, c1, c2) of |gg0>, |ee0>, |ge1> under the toy gate."""
    k2 = tp.kappa**2
    wt = tp.alpha * np.sqrt(1 + k2) * np.asarray(t, dtype=float)
    c0 = (1 + k2 * np.cos(wt)) / (1 + k2)
    c1 = tp.kappa * (1 - np.cos(wt)) / (1 + k2)
    c2 = tp.kappa * np.sin(wt) / np.sqrt(k2 + 1)
    return c0 + 0j, c1 + 0j, c2 + 0j


@dataclass(frozen=True)
class ToyTimes:
    theta0: float
    theta1: float
    t0: float
    t1: float


def _arccos_checked(theta, name):
    # the balanced point sits exactly on theta = -1; forgive round-off there
    if abs(theta) > 1 + 1e-12:
        raise NoSolutionError(f"{name} = {theta:.6g} lies outside [-1, 1]")
    return math.acos(min(1.0, max(-1.0, theta)))


def toy_times(kappa: float, alpha: float = 1.0) -> ToyTimes:
    """Times where c0 = 1/sqrt2 (t0) and c1 = 1/sqrt2 (t1)."""
    if not kappa > 0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    k2 = kappa**2
    theta0 = (-2 + SQRT2 + SQRT2 * k2) / (2 * k2)
    theta1 = (-SQRT2 + 2 * kappa - SQRT2 * k2) / (2 * kappa)
    rate = alpha * math.sqrt(1 + k2)
    return ToyTimes(theta0, theta1,
                    _arccos_checked(theta0, "theta0") / rate,
                    _arccos_checked(theta1, "theta1") / rate)


def toy_gate_time(alpha: float = 1.0) -> float:
    """sqrt(2 + sqrt2) pi / (2 alpha): t0 = t1 at kappa = sqrt2 - 1."""
    return math.sqrt(2 + SQRT2) * math.pi / (2 * alpha)


def toy_evolve(tp: ToyParams, n: int, t: float) -> np.ndarray:
    """State on :func:`toy_subspace` (n) at time t, starting from |g g n>."""
    H = toy_hamiltonian(tp, n)
    w, V = np.linalg.eigh(H)
    psi0 = np.zeros(H.shape[0], dtype=complex)
    psi0[0] = 1.0
    return V @ (np.exp(-1j * w * t) * (V.conj().T @ psi0))


def toy_overlap(tp: ToyParams, n: int, t: float) -> float:
    """|<Phi+|<n|psi_n(t)>|^2 for the toy gate."""
    psi = toy_evolve(tp, n, t)
    labels = toy_subspace(n)
    amp = psi[labels.index(("g", "g", n))] + psi[labels.index(("e", "e", n))]
    return float(abs(amp) ** 2 / 2)


def toy_fidelity_thermal(tp: ToyParams, spec: ThermalSpec, t: float | None = None) -> float:
    """Thermal fidelity of the toy gate with |Phi+> at ``t`` (default T~0)."""
    t = toy_gate_time(tp.alpha) if t is None else t
    w = phonon_weights(spec)
    ov = np.array([toy_overlap(tp, n, t) if w[n] > 0 else 0.0 for n in range(spec.trunc_dim)])
    return float(w @ ov)


__all__ = [
    "BellTarget", "KAPPA_BALANCED", "NoSolutionError", "PHI_PLUS", "PSI_GATE", "ThermalSpec",
    "ToyTimes", "basis_index", "default_gate_time", "fidelity_vs_nth", "ion_fidelity",
    "phonon_weights", "thermal_overlaps", "toy_closed_form", "toy_evolve", "toy_fidelity_thermal",
    "toy_gate_time", "toy_overlap", "toy_times",
]
