"""Gate periods: from trajectories, from reduced-model eigenvalues, and closed forms."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit
from scipy.stats import linregress

from .core import ION_LABELS, GateParams, MSGateError
from .evolve import Trajectory
from .hamiltonians import reduced3, reduced5

METHODS = ("trajectory-minimum", "trajectory-fit", "phase-slope", "eigenvalue",
           "closed-form", "analytic-formula")


class NotPeriodicError(MSGateError):
    pass


class ChannelLeakageError(MSGateError):
    pass


class BranchError(MSGateError):
    """Closed-form period disagrees with the eigenvalue oracle."""

    def __init__(self, closed, oracle, params):
        self.closed = closed
        self.oracle = oracle
        self.params = params
        super().__init__(f"closed form gives {closed!r}, eigenvalues give {oracle!r} at {params}")


class EigenSolverError(MSGateError):
    pass


@dataclass(frozen=True)
class PeriodEstimate:
    """A period with provenance.

    ``value`` is positive, or ``math.inf`` when the mode does not oscillate.
    ``sign`` carries the rotation sense for phase-slope estimates.
    """

    value: float
    method: str
    uncertainty: float = 0.0
    sign: int = 1

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    @property
    def signed(self) -> float:
        return self.sign * self.value

    def __float__(self):
        return float(self.value)


def _quadratic_peak(t, y, i):
    """Vertex of the parabola through samples i-1, i, i+1."""
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = y0 - 2 * y1 + y2
    off = 0.0 if denom == 0 else 0.5 * (y0 - y2) / denom
    h = t[i + 1] - t[i]
    return t[i] + off * h


def _first_lobe_peak(t, y):
    """Index of the top of the first large excursion above the midline.

    Ripple from fast virtual excitations rides on the slow oscillation, so the
    lobe is delimited with hysteresis: it starts at the first sample above the
    midline and ends once the signal falls a quarter-range below it.
    """
    lo, hi = float(np.min(y)), float(np.max(y))
    mid = 0.5 * (lo + hi)
    above = np.nonzero(y > mid)[0]
    if above.size == 0:
        raise NotPeriodicError("channel never rises above its midline")
    start = above[0]
    below = np.nonzero(y[start:] < mid - 0.25 * (hi - lo))[0]
    stop = start + below[0] if below.size else len(y)
    i = start + int(np.argmax(y[start:stop]))
    if i == 0 or i >= len(y) - 1:
        raise NotPeriodicError("no interior extremum; extend the trajectory past half a period")
    return i


def extract_period(traj: Trajectory, channel: str = "ee", method: str = "extremum") -> PeriodEstimate:
    """Period of the slow gg <-> ee population exchange.

    ``method="extremum"`` locates the first maximum of the channel (minimum
    for ``"gg"``) with 3-point quadratic interpolation and doubles its time,
    since ``Prob(ee) ~ (1 - cos(2 pi t / T)) / 2`` peaks at T/2.
    ``method="fit"`` least-squares fits ``c + A cos(2 pi t / T)`` to the whole
    trace, which averages out the fast ripple; it needs about a full period.
    """
    if channel not in ION_LABELS:
        raise ValueError(f"channel must be one of {ION_LABELS}, got {channel!r}")
    t = np.asarray(traj.times, dtype=float) - traj.times[0]
    y = traj.prob(channel)
    if np.ptp(y) < 0.1:
        raise NotPeriodicError(f"Prob({channel}) varies by only {np.ptp(y):.3g}")
    sgn = -1.0 if channel == "gg" else 1.0
    i = _first_lobe_peak(t, sgn * y)
    peak = _quadratic_peak(t, sgn * y, i)
    half_width = 0.5 * (t[i + 1] - t[i])
    if method == "extremum":
        return PeriodEstimate(2 * peak, "trajectory-minimum", 2 * half_width)
    if method != "fit":
        raise ValueError(f"method must be 'extremum' or 'fit', got {method!r}")

    def model(tt, T, amp, offset):
        return offset + amp * np.cos(2 * np.pi * tt / T)

    p0 = (2 * peak, -sgn * 0.5 * np.ptp(y), float(np.mean(y)))
    try:
        popt, pcov = curve_fit(model, t, y, p0=p0)
    except RuntimeError as exc:
        raise NotPeriodicError(f"sinusoid fit failed: {exc}") from None
    err = float(np.sqrt(pcov[0, 0])) if np.isfinite(pcov[0, 0]) else math.inf
    return PeriodEstimate(abs(float(popt[0])), "trajectory-fit", err)


def extract_phase_period(times, amplitudes, min_modulus: float = 0.9) -> PeriodEstimate:
    """Period of a pure phase rotation ``c(t) ~ exp(2 pi i t / T)``.

    The unwrapped phase is fitted with a straight line; ``sign`` is +1 for a
    counter-clockwise rotation (positive slope) and -1 otherwise.
    """
    times = np.asarray(times, dtype=float)
    c = np.asarray(amplitudes, dtype=complex)
    if times.shape != c.shape or times.size < 3:
        raise ValueError("times and amplitudes must be equal-length 1-D arrays (>= 3 samples)")
    low = float(np.min(np.abs(c)))
    if low < min_modulus:
        raise ChannelLeakageError(f"|amplitude| drops to {low:.3f} (< {min_modulus})")
    fit = linregress(times, np.unwrap(np.angle(c)))
    if fit.slope == 0:
        return PeriodEstimate(math.inf, "phase-slope")
    value = 2 * math.pi / abs(fit.slope)
    return PeriodEstimate(value, "phase-slope", value * fit.stderr / abs(fit.slope),
                          sign=1 if fit.slope > 0 else -1)


def eigen_periods(A) -> list[PeriodEstimate]:
    """``|Re(2 pi i / lambda)|`` for every eigenvalue of A.

    Zero or purely real eigenvalues give no oscillation and are reported as
    infinite periods.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    try:
        lam = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(str(exc)) from None
    out = []
    scale = max(1.0, float(np.max(np.abs(lam))))
    for z in lam:
        if abs(z) <= 1e-300:
            out.append(PeriodEstimate(math.inf, "eigenvalue"))
            continue
        period = abs((2j * math.pi / z).real)
        # Im(lambda) at round-off level counts as non-oscillating
        if abs(z.imag) <= 1e-14 * scale or period == 0:
            out.append(PeriodEstimate(math.inf, "eigenvalue"))
        else:
            out.append(PeriodEstimate(period, "eigenvalue"))
    return out


def longest_finite(periods) -> PeriodEstimate:
    finite = [p for p in periods if p.finite]
    if not finite:
        raise NotPeriodicError("no finite period")
    return max(finite, key=lambda p: p.value)


def closed_form_T0_raw(omega, eta, nu, dnu) -> float:
    """Closed-form period of the three-variable model, principal branches."""
    U = (2 * dnu**3 + 3 * nu * dnu**2 - 3 * nu**2 * dnu - 2 * nu**3
         + 18 * (dnu + eta**2 * dnu - nu + 2 * eta**2 * nu) * omega**2)
    Y = dnu**2 + nu * dnu + nu**2 + 6 * (1 + eta**2) * omega**2
    W = 4 * Y**3 - U**2
    Z = (1j * U + np.sqrt(complex(W))) ** (1 / 3)
    X = 2j * (dnu - nu) + 2 ** (4 / 3) * Y / Z - 2 ** (2 / 3) * Z
    return float(12 * math.pi * (1 / X).imag)


def closed_form_T0(p: GateParams, validate: bool = True, rtol: float = 1e-6) -> PeriodEstimate:
    """Closed-form gate period for |g g 0>, checked against the eigenvalues.

    Raises
    ------
    BranchError
        If the principal-branch evaluation disagrees with the longest finite
        eigen-period of the reduced 3x3 model by more than ``rtol``.
    """
    value = closed_form_T0_raw(p.omega, p.eta, p.nu, p.dnu)
    if validate:
        oracle = longest_finite(eigen_periods(reduced3(p).A)).value
        if not (value > 0 and abs(value - oracle) <= rtol * oracle):
            raise BranchError(value, oracle, p)
    return PeriodEstimate(value, "closed-form")


def t_prime(p: GateParams, n: int) -> PeriodEstimate:
    """Longest finite eigen-period of the five-variable model for |g g n>."""
    return longest_finite(eigen_periods(reduced5(p, n).A))


def t_prime_fit(p: GateParams, n_max: int = 5) -> tuple[float, float]:
    """Straight-line fit (intercept, slope) of the period against n = 0..n_max.

    n = 0 uses the closed-form value, n >= 1 the five-variable model.
    """
    ns = np.arange(n_max + 1)
    periods = [closed_form_T0(p).value] + [t_prime(p, n).value for n in ns[1:]]
    slope, intercept = np.polyfit(ns, periods, 1)
    return float(intercept), float(slope)


def t_ms(p: GateParams) -> float:
    """Period of the four-beam Molmer-Sorensen gate, pi dnu / (eta Omega)^2."""
    if p.eta == 0:
        return math.inf
    return math.pi * p.dnu / (p.eta**2 * p.omega**2)


def t_ge_zero_formula(p: GateParams) -> float:
    """Phase period of |g e 0>: pi (nu + dnu) / Omega^2."""
    return math.pi * (p.nu + p.dnu) / p.omega**2


def cz_scales(p: GateParams) -> tuple[float, float, float]:
    """Cirac-Zoller reference scales.

    Returns the one-ion gate time scale 1/Omega, the lower bound
    1/(eta^2 nu) on the ion-phonon gate time, and the second-order energy
    shift -Omega^2/nu. Order-of-magnitude quantities only.
    """
    bound = math.inf if p.eta == 0 else 1.0 / (p.eta**2 * p.nu)
    return 1.0 / p.omega, bound, -p.omega**2 / p.nu
