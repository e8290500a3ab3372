"""Simulation of a two-beam Molmer-Sorensen gate for two trapped ions."""
from ._backend import BACKEND
from .core import DEFAULT_PARAMS, GateParams, MSGateError, basis_index, basis_state, basis_unindex
from .evolve import IntegrationDivergedError, TimeGrid, Trajectory, evolve_affine, schrodinger_evolve
from .hamiltonians import (
    FourierHamiltonian,
    ToyParams,
    exact_hamiltonian,
    gate_hamiltonian,
    perturbative_hamiltonian,
    reduced3,
    reduced5,
    toy_hamiltonian,
)
from .spectral import (
    BranchError,
    PeriodEstimate,
    closed_form_T0,
    eigen_periods,
    extract_period,
    extract_phase_period,
    t_ms,
    t_prime,
)
from .thermal import ThermalSpec, fidelity_vs_nth, phonon_weights, toy_fidelity_thermal, toy_times

__version__ = "0.1.0"
