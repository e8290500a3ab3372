"""Data generators behind the CLI figure commands.

Each function returns ``(header, rows)`` ready for :func:`msgate.evolve.write_csv`;
rows are sorted by their first column.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .core import GateParams, basis_index, basis_state
from .evolve import TimeGrid, schrodinger_evolve
from .hamiltonians import ToyParams, gate_hamiltonian
from .spectral import (
    closed_form_T0,
    cz_scales,
    extract_period,
    extract_phase_period,
    t_ge_zero_formula,
    t_ms,
    t_prime,
)
from .thermal import (
    ThermalSpec,
    default_gate_time,
    fidelity_vs_nth,
    thermal_overlaps,
    toy_closed_form,
    toy_fidelity_thermal,
    toy_gate_time,
)

FIG2_DIMS = (4, 6, 8, 10)
FIG2_NTH = tuple(np.linspace(0.0, 1.5, 8))
FIG4B_NTH = tuple(np.linspace(0.0, 1.5, 31))
FIG4B_TRUNC = 64
FIG3_VALUES = {
    "dnu": (0.01, 0.015, 0.02, 0.025, 0.03, 0.04, 0.05),
    "nu": (2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0),
    "omega": (0.05, 0.075, 0.1, 0.125, 0.15, 0.2),
}
FIG3_PARAM = {"fig3a": "dnu", "fig3b": "nu", "fig3c": "omega"}
SWEEP_PARAMS = ("omega", "eta", "nu", "dnu")


def _map(fn, items, jobs):
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def simulate(p: GateParams, t_end: float, n: int = 0, initial=("g", "g"), dt=None,
             sample_every: float = 1.0, order=2):
    """Trajectory from |initial, n> under the gate Hamiltonian."""
    grid = TimeGrid.for_gate(p.nu, t_end, dt=dt, sample_every=sample_every)
    psi0 = basis_state(*initial, n, p.phonon_dim)
    return schrodinger_evolve(gate_hamiltonian(p, order), psi0, grid)


def numeric_T0(p: GateParams, n: int = 0, method: str = "fit", dt=None, span: float = 1.05):
    """Gate period T0(n) extracted from a simulated trajectory.

    The run covers ``span`` times the closed-form (n = 0) or five-variable
    (n >= 1) estimate, which is what the sinusoid fit needs.
    """
    guess = closed_form_T0(p).value if n == 0 else t_prime(p, n).value
    traj = simulate(p, span * guess, n=n, dt=dt, sample_every=guess / 4000)
    return extract_period(traj, "ee", method).value


def fig1(p: GateParams, t_end: float = 16000.0, dt=None, sample_every: float = 1.0):
    """Trajectory from |g g 0> with populations and c_gg, c_ee."""
    return simulate(p, t_end, dt=dt, sample_every=sample_every)


def fig2(p: GateParams, n_th_values=FIG2_NTH, dims=FIG2_DIMS, dt=None, t_gate=None, jobs: int = 1):
    """Thermal fidelity at a quarter period for several phonon truncations."""
    t_gate = default_gate_time(p) if t_gate is None else t_gate
    n_th_values = sorted(n_th_values)
    cols = []
    for N in dims:
        q = p.replace(phonon_dim=N)
        need_all = any(x > 0 for x in n_th_values)
        ov = thermal_overlaps(q, t_gate, dt=dt, n_values=None if need_all else [0], jobs=jobs)
        cols.append([fidelity_vs_nth(q, ThermalSpec(x, N), t_gate, overlaps=ov) for x in n_th_values])
    header = ["n_th"] + [f"F_dim{N}" for N in dims]
    return header, [[x, *c] for x, c in zip(n_th_values, zip(*cols))]


def sweep(p: GateParams, param: str, values, numeric: bool = True, method: str = "fit",
          dt=None, jobs: int = 1):
    """(param_value, t0_numeric, t0_closed, t_ms) across values of one parameter.

    With ``numeric=False`` the simulated column is NaN.
    """
    if param not in SWEEP_PARAMS:
        raise ValueError(f"param must be one of {SWEEP_PARAMS}, got {param!r}")
    values = sorted(float(v) for v in values)
    points = [p.replace(**{param: v}) for v in values]
    closed = [closed_form_T0(q).value for q in points]
    numer = _map(lambda q: numeric_T0(q, method=method, dt=dt), points, jobs) if numeric \
        else [math.nan] * len(points)
    header = ["param_value", "t0_numeric", "t0_closed", "t_ms"]
    return header, [[v, tn, tc, t_ms(q)] for v, tn, tc, q in zip(values, numer, closed, points)]


def fig3(p: GateParams, command: str, values=None, numeric: bool = True, dt=None, jobs: int = 1):
    param = FIG3_PARAM[command]
    return sweep(p, param, FIG3_VALUES[param] if values is None else values, numeric,
                 dt=dt, jobs=jobs)


def fig3d(p: GateParams, n_max: int = 5, numeric_max: int = 5, dt=None, jobs: int = 1):
    """(n, T0(n) numeric, T'(n), T_MS) for n = 0..n_max, simulated with N = n + 3.

    T'(0) is the closed form. Rows with n > ``numeric_max`` carry NaN in the
    simulated column.
    """
    ns = list(range(n_max + 1))

    def numeric(n):
        if n > numeric_max:
            return math.nan
        return numeric_T0(p.replace(phonon_dim=n + 3), n=n, dt=dt)

    numer = _map(numeric, ns, jobs)
    tp = [closed_form_T0(p).value] + [t_prime(p, n).value for n in ns[1:]]
    return ["n", "t0_numeric", "t_prime", "t_ms"], [[n, a, b, t_ms(p)] for n, a, b in zip(ns, numer, tp)]


def fig4a(tp: ToyParams, t_end: float | None = None, samples: int = 801):
    """|c0|^2 and |c1|^2 of the toy gate over [0, t_end] (default 4 T~0)."""
    t_end = 4 * toy_gate_time(tp.alpha) if t_end is None else t_end
    t = np.linspace(0.0, t_end, samples)
    c0, c1, _ = toy_closed_form(tp, t)
    return ["t", "abs_c0_sq", "abs_c1_sq"], np.column_stack([t, abs(c0) ** 2, abs(c1) ** 2]).tolist()


def fig4b(tp: ToyParams, n_th_values=FIG4B_NTH, trunc_dim: int = FIG4B_TRUNC):
    """Thermal fidelity of the toy gate with |Phi+> at T~0."""
    rows = [[x, toy_fidelity_thermal(tp, ThermalSpec(x, trunc_dim))] for x in sorted(n_th_values)]
    return ["n_th", "F_toy"], rows


def single_excitation_periods(p: GateParams, t_end: float = 5000.0, dt=None):
    """Signed phase periods of <g e 0|psi> and <e g 0|psi>, each started there."""
    out = {}
    for name, ions in (("ge", ("g", "e")), ("eg", ("e", "g"))):
        traj = simulate(p, t_end, initial=ions, dt=dt)
        c = traj.amplitude(basis_index(*ions, 0, p.phonon_dim))
        out[name] = extract_phase_period(traj.times, c)
    return out["ge"], out["eg"]


def periods(p: GateParams, tp: ToyParams, dt=None, method: str = "extremum"):
    """Summary of every period and reference scale at the given parameters."""
    # the extremum sits at T/2; the cosine fit wants a full period
    span = 1.05 if method == "fit" else 0.65
    T0 = extract_period(simulate(p, span * closed_form_T0(p).value, dt=dt), "ee", method).value
    ge, eg = single_excitation_periods(p, dt=dt)
    one, lower, shift = cz_scales(p)
    return {
        "T0": T0,
        "T0_closed": closed_form_T0(p).value,
        "T_MS": t_ms(p),
        "T_ge": ge.signed,
        "T_ge_formula": t_ge_zero_formula(p),
        "T_eg": eg.signed,
        "T_toy": toy_gate_time(tp.alpha),
        "cz_time": one,
        "cz_lower_bound": lower,
        "cz_shift": shift,
    }
