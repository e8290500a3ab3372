"""Schrodinger-equation integration and observables."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _backend
from .core import ION_LABELS, MSGateError
from .hamiltonians import FourierHamiltonian, ReducedSystem

# |norm - 1| beyond this means the step is too coarse for the Hamiltonian
DIVERGENCE_THRESHOLD = 1e-4


class IntegrationDivergedError(MSGateError):
    pass


def default_dt(nu: float, steps_per_cycle: int = 50) -> float:
    """Step giving ``steps_per_cycle`` RK4 steps per period of exp(2i nu t)."""
    return (2 * math.pi / (2 * nu)) / steps_per_cycle


@dataclass(frozen=True)
class TimeGrid:
    """Uniform RK4 grid from ``t_start`` to ``t_end``.

    ``dt`` is an upper bound: the actual step is shrunk slightly so that an
    integer number of steps lands exactly on ``t_end``. Every
    ``sample_stride``-th state is kept, plus the final one.
    """

    t_start: float
    t_end: float
    dt: float
    sample_stride: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if not self.t_end > self.t_start:
            raise ValueError(f"t_end ({self.t_end}) must exceed t_start ({self.t_start})")
        if int(self.sample_stride) != self.sample_stride or self.sample_stride < 1:
            raise ValueError(f"sample_stride must be a positive integer, got {self.sample_stride}")

    @classmethod
    def for_gate(cls, nu: float, t_end: float, t_start: float = 0.0, dt: float | None = None,
                 sample_every: float = 1.0) -> "TimeGrid":
        """Grid with the default step for trap frequency ``nu``, sampled about
        every ``sample_every`` time units."""
        dt = default_dt(nu) if dt is None else dt
        return cls(t_start, t_end, dt, max(1, int(round(sample_every / dt))))

    @property
    def nsteps(self) -> int:
        return max(1, math.ceil((self.t_end - self.t_start) / self.dt - 1e-9))

    @property
    def step(self) -> float:
        return (self.t_end - self.t_start) / self.nsteps

    def sample_times(self) -> np.ndarray:
        k = np.arange(0, self.nsteps + 1, self.sample_stride)
        if k[-1] != self.nsteps:
            k = np.append(k, self.nsteps)
        return self.t_start + k * self.step


def prob_kl(psi) -> np.ndarray:
    """Populations (gg, ge, eg, ee) summed over phonon number.

    Accepts a single state of length 4N or a stack of shape (..., 4N).
    """
    psi = np.asarray(psi)
    d = psi.shape[-1]
    if d % 4:
        raise ValueError(f"state length {d} is not a multiple of 4")
    p = np.abs(psi.reshape(psi.shape[:-1] + (4, d // 4))) ** 2
    return p.sum(axis=-1)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled states of one integration run."""

    times: np.ndarray
    states: np.ndarray
    amplitude_indices: tuple = ()

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)

    @property
    def norm_drift(self) -> float:
        return float(np.max(np.abs(self.norms - 1.0)))

    @property
    def probs(self) -> np.ndarray:
        """(samples, 4) array of Prob(gg), Prob(ge), Prob(eg), Prob(ee)."""
        return prob_kl(self.states)

    def prob(self, channel: str) -> np.ndarray:
        return self.probs[:, ION_LABELS.index(channel)]

    @property
    def amplitudes(self) -> np.ndarray:
        return self.states[:, list(self.amplitude_indices)]

    def amplitude(self, index: int) -> np.ndarray:
        return self.states[:, index]

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def state_at(self, t: float) -> np.ndarray:
        """State at the sample nearest to ``t``."""
        return self.states[int(np.argmin(np.abs(self.times - t)))]

    def table(self, amplitudes: bool = True):
        """Header and rows ``t,prob_gg,prob_ge,prob_eg,prob_ee,norm``.

        With ``amplitudes`` the Re/Im parts of c_gg = <g g 0|psi> and
        c_ee = <e e 0|psi> are appended.
        """
        N = self.dim // 4
        header = ["t", "prob_gg", "prob_ge", "prob_eg", "prob_ee", "norm"]
        cols = [self.times, *self.probs.T, self.norms]
        if amplitudes:
            header += ["re_cgg", "im_cgg", "re_cee", "im_cee"]
            cgg, cee = self.states[:, 0], self.states[:, 3 * N]
            cols += [cgg.real, cgg.imag, cee.real, cee.imag]
        return header, np.column_stack(cols)

    def to_csv(self, path, amplitudes: bool = True) -> None:
        write_csv(path, *self.table(amplitudes))


def write_csv(path, header, rows) -> None:
    """Write rows at full double precision; ``path`` may be an open file."""
    if hasattr(path, "write"):
        _write_rows(path, header, rows)
        return
    with open(path, "w", newline="") as fh:
        _write_rows(fh, header, rows)


def _write_rows(fh, header, rows):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_float(x) for x in row])


def format_float(x) -> str:
    x = float(x)
    if math.isinf(x) or math.isnan(x):
        return repr(x)
    return f"{x:.17g}"


def _rk4_callable(H, psi0, grid: TimeGrid) -> np.ndarray:
    h = grid.step
    t0 = grid.t_start
    psi = np.array(psi0, dtype=complex)
    out = [psi.copy()]
    f = lambda t, y: -1j * (np.asarray(H(t)) @ y)
    for i in range(grid.nsteps):
        t = t0 + i * h
        k1 = f(t, psi)
        k2 = f(t + h / 2, psi + h / 2 * k1)
        k3 = f(t + h / 2, psi + h / 2 * k2)
        k4 = f(t + h, psi + h * k3)
        psi = psi + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if (i + 1) % grid.sample_stride == 0 or i + 1 == grid.nsteps:
            out.append(psi.copy())
    return np.array(out)


def schrodinger_evolve(H, psi0, grid: TimeGrid, amplitude_indices=(), kernel=None) -> Trajectory:
    """Integrate ``i dpsi/dt = H(t) psi`` with the classical RK4 scheme.

    Parameters
    ----------
    H : FourierHamiltonian or callable
        A :class:`FourierHamiltonian` runs on the selected kernel (compiled if
        available). Any other callable ``t -> matrix`` goes through a plain
        Python RK4 loop.
    psi0 : array_like
        Normalized initial state.
    grid : TimeGrid
    amplitude_indices : sequence of int
        Basis indices exposed as :attr:`Trajectory.amplitudes`.
    kernel : callable, optional
        Override the RK4 kernel (used by tests and the benchmark).

    Raises
    ------
    IntegrationDivergedError
        If the norm drifts by more than 1e-4 anywhere along the run.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-9:
        raise ValueError("initial state must be normalized")
    if isinstance(H, FourierHamiltonian):
        if H.dim != psi0.size:
            raise ValueError(f"Hamiltonian dim {H.dim} does not match state length {psi0.size}")
        rk4 = kernel or _backend.rk4_fourier
        rows, cols, vals, fidx = H.sparse()
        states = rk4(H.freqs, rows, cols, vals, fidx, psi0, float(grid.t_start),
                     float(grid.step), int(grid.nsteps), int(grid.sample_stride))
    else:
        states = _rk4_callable(H, psi0, grid)
    states = np.asarray(states)
    traj = Trajectory(grid.sample_times(), states, tuple(amplitude_indices))
    drift = traj.norm_drift
    if not drift <= DIVERGENCE_THRESHOLD:
        raise IntegrationDivergedError(
            f"norm drift {drift:.3g} exceeds {DIVERGENCE_THRESHOLD:g}; reduce dt (was {grid.step:.4g})")
    return traj


def evolve_affine(sys: ReducedSystem, t, cond_limit: float = 1e8) -> np.ndarray:
    """Solution of ``dc/dt = A c + b`` at time(s) ``t``.

    Uses the eigen-decomposition of A with the constant shift ``A^-1 b``.
    When A is singular or its eigenvectors are ill-conditioned, falls back to
    the exponential of the augmented matrix ``[[A, b], [0, 0]]``, which is
    exact for any A.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    A, b, c0 = sys.A, sys.b, sys.c0
    lam, V = np.linalg.eig(A)
    singular = np.min(np.abs(lam)) < 1e-14 * max(1.0, np.max(np.abs(lam)))
    if not singular and np.linalg.cond(V) < cond_limit:
        shift = np.linalg.solve(A, b)
        coef = np.linalg.solve(V, c0 + shift)
        out = (V @ (coef[:, None] * np.exp(np.outer(lam, t_arr)))).T - shift
    else:
        n = sys.size
        aug = np.zeros((n + 1, n + 1), dtype=complex)
        aug[:n, :n] = A
        aug[:n, n] = b
        start = np.append(c0, 1.0)
        out = np.array([(scipy.linalg.expm(aug * tk) @ start)[:n] for tk in t_arr])
    return out[0] if np.ndim(t) == 0 else out
