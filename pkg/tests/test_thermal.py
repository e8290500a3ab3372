import math

import numpy as np
import pytest

from msgate.core import GateParams, basis_state
from msgate.hamiltonians import ToyParams
from msgate.thermal import (
    PHI_PLUS,
    PSI_GATE,
    BellTarget,
    NoSolutionError,
    ThermalSpec,
    _evolve_to,
    default_gate_time,
    fidelity_vs_nth,
    ion_fidelity,
    phonon_weights,
    toy_closed_form,
    toy_evolve,
    toy_fidelity_thermal,
    toy_gate_time,
    toy_times,
)


def test_weights_examples():
    np.testing.assert_array_equal(phonon_weights(ThermalSpec(0.0, 4)), [1, 0, 0, 0])
    np.testing.assert_allclose(phonon_weights(ThermalSpec(1.0, 4)), [0.5, 0.25, 0.125, 0.0625])
    np.testing.assert_allclose(phonon_weights(ThermalSpec(1.0, 4, renormalize=True)),
                               np.array([0.5, 0.25, 0.125, 0.0625]) / 0.9375)


@pytest.mark.parametrize("n_th", [0.01, 0.3, 1.5, 40.0])
def test_weights_are_a_decreasing_subprobability(n_th):
    w = phonon_weights(ThermalSpec(n_th, 60))
    assert np.all(w > 0) and np.all(np.diff(w) < 0)
    assert w.sum() <= 1 + 1e-15


def test_weights_match_boltzmann_form():
    spec = ThermalSpec(0.7, 6)
    bn = spec.beta_nu
    n = np.arange(6)
    np.testing.assert_allclose(phonon_weights(spec), (1 - np.exp(-bn)) * np.exp(-bn * n))


def test_bell_targets():
    for target in (PSI_GATE, PHI_PLUS):
        amp = target.amplitudes.reshape(2, 2)
        rho_a = amp @ amp.conj().T
        np.testing.assert_allclose(np.diag(rho_a).real, [0.5, 0.5])
    with pytest.raises(ValueError):
        BellTarget(np.array([1, 1, 0, 0]), "bad")


def test_ion_fidelity_traces_out_phonons():
    N = 3
    psi = np.kron(PSI_GATE.amplitudes, np.array([0.6, 0, 0.8]))
    assert ion_fidelity(psi) == pytest.approx(1)
    assert ion_fidelity(basis_state("g", "e", 1, N)) == 0


def test_zero_temperature_fidelity_is_the_single_run_overlap():
    p = GateParams()
    t = default_gate_time(p)
    single = ion_fidelity(_evolve_to(p, 0, t, 2, None))
    assert fidelity_vs_nth(p, ThermalSpec(0.0, 4)) == pytest.approx(single, abs=1e-10)


def test_toy_closed_form_at_zero_and_unitarity():
    np.testing.assert_array_equal(toy_closed_form(ToyParams(), 0.0), (1, 0, 0))
    rng = np.random.default_rng(2)
    for _ in range(20):
        tp = ToyParams(rng.uniform(0.1, 3), rng.uniform(0.1, 3))
        c = np.array(toy_closed_form(tp, rng.uniform(0, 50)))
        assert np.sum(np.abs(c) ** 2) == pytest.approx(1, abs=1e-14)


def test_toy_closed_form_matches_matrix_exponential():
    rng = np.random.default_rng(3)
    for _ in range(10):
        tp = ToyParams(rng.uniform(0.1, 3), rng.uniform(0.1, 3))
        for t in np.linspace(0, 4 * toy_gate_time(tp.alpha), 50):
            np.testing.assert_allclose(toy_closed_form(tp, t), toy_evolve(tp, 0, t), atol=1e-9)


def test_toy_balanced_point():
    times = toy_times(math.sqrt(2) - 1)
    assert times.theta0 == pytest.approx(-1, abs=1e-12)
    assert times.theta1 == pytest.approx(-1, abs=1e-12)
    assert times.t0 == pytest.approx(toy_gate_time(), abs=1e-6)
    assert times.t1 == pytest.approx(toy_gate_time(), abs=1e-6)
    # sqrt(2 + sqrt 2) pi / 2
    assert toy_gate_time() == pytest.approx(2.902454, abs=1e-6)
    c0, c1, _ = toy_closed_form(ToyParams(), toy_gate_time())
    assert c0 == pytest.approx(1 / math.sqrt(2))
    assert abs(c1) == pytest.approx(1 / math.sqrt(2))


def test_toy_state_period_is_four_gate_times():
    tp = ToyParams(alpha=1.7)
    np.testing.assert_allclose(toy_evolve(tp, 0, 4 * toy_gate_time(1.7)), [1, 0, 0], atol=1e-12)


def test_toy_times_no_solution():
    with pytest.raises(NoSolutionError):
        toy_times(0.1)


def test_toy_thermal_fidelity():
    assert toy_fidelity_thermal(ToyParams(), ThermalSpec(0.0, 64)) == pytest.approx(1, abs=1e-10)
    for n_th in (0.1, 0.5, 1.5):
        a = toy_fidelity_thermal(ToyParams(alpha=0.5), ThermalSpec(n_th, 64))
        b = toy_fidelity_thermal(ToyParams(alpha=2.0), ThermalSpec(n_th, 64))
        assert a == pytest.approx(b, abs=1e-9)


def test_toy_gate_is_less_robust_than_the_two_beam_gate():
    p = GateParams()
    toy_drop = 1 - toy_fidelity_thermal(ToyParams(), ThermalSpec(0.5, 64))
    F0 = fidelity_vs_nth(p, ThermalSpec(0.0, 4))
    gate_drop = 1 - fidelity_vs_nth(p, ThermalSpec(0.5, 4)) / F0
    assert toy_drop > gate_drop
