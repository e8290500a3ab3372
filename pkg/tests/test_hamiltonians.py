import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msgate.core import GateParams, basis_index, hermiticity_defect
from msgate.hamiltonians import (
    FourierHamiltonian,
    ToyParams,
    handcoded_rhs,
    exact_hamiltonian,
    gate_hamiltonian,
    perturbative_hamiltonian,
    reduced3,
    reduced5,
    toy_full_hamiltonian,
    toy_hamiltonian,
    toy_subspace,
)

P = GateParams()


@pytest.mark.parametrize("order", [0, 1, 2])
def test_fourier_form_matches_direct_perturbative(order):
    H = gate_hamiltonian(P, order)
    for t in (0.0, 0.37, 12.5, 3001.2):
        np.testing.assert_allclose(H(t), perturbative_hamiltonian(P, t, order), atol=1e-13)


def test_fourier_form_matches_direct_exact():
    p = P.replace(phonon_dim=6, eta=0.2)
    H = gate_hamiltonian(p, "exact")
    for t in (0.0, 0.9, 77.7):
        np.testing.assert_allclose(H(t), exact_hamiltonian(p, t), atol=1e-12)


def test_order_zero_has_no_phonon_coupling():
    H = perturbative_hamiltonian(P, 1.3, 0)
    N = P.phonon_dim
    for n in range(N - 1):
        assert H[basis_index("e", "g", n, N), basis_index("g", "g", n + 1, N)] == 0


def test_bad_order_rejected():
    with pytest.raises(ValueError):
        gate_hamiltonian(P, 3)
    with pytest.raises(ValueError):
        perturbative_hamiltonian(P, 0.0, "exact")


def test_appendix_b_matches_matrix_hamiltonian():
    rng = np.random.default_rng(0)
    for _ in range(100):
        p = GateParams(rng.uniform(0.01, 0.2), rng.uniform(0.005, 0.05), rng.uniform(1, 10),
                       rng.uniform(0.005, 0.1), phonon_dim=2)
        t = rng.uniform(0, 1e4)
        c = rng.normal(size=8) + 1j * rng.normal(size=8)
        ref = -1j * perturbative_hamiltonian(p, t, 2) @ c
        np.testing.assert_allclose(handcoded_rhs(p, t, c), ref, atol=1e-10)


def test_second_order_term_scales_with_eta_squared():
    t = 2.1
    d1 = perturbative_hamiltonian(P, t, 2) - perturbative_hamiltonian(P, t, 1)
    p2 = P.replace(eta=2 * P.eta)
    d2 = perturbative_hamiltonian(p2, t, 2) - perturbative_hamiltonian(p2, t, 1)
    np.testing.assert_allclose(d2, 4 * d1, atol=1e-15)


def test_exact_minus_second_order_is_third_order():
    # the difference at eta and 2 eta should grow by about 2^3
    p = P.replace(phonon_dim=8)
    diffs = []
    for eta in (0.01, 0.02):
        q = p.replace(eta=eta)
        diffs.append(np.max(np.abs(exact_hamiltonian(q, 0.4) - perturbative_hamiltonian(q, 0.4, 2))))
    assert 7.0 < diffs[1] / diffs[0] < 9.0


def test_hamiltonians_are_hermitian():
    for t in (0.0, 1.0, 100.0):
        assert hermiticity_defect(exact_hamiltonian(P, t)) < 1e-14
        assert hermiticity_defect(perturbative_hamiltonian(P, t, 2)) < 1e-14


@settings(max_examples=40, deadline=None)
@given(omega=st.floats(0.01, 1.0), eta=st.floats(0.0, 0.45), nu=st.floats(0.5, 20),
       dnu=st.floats(0.001, 1.0), N=st.integers(2, 8), t=st.floats(0, 1e4))
def test_hermitian_for_any_parameters(omega, eta, nu, dnu, N, t):
    p = GateParams(omega, eta, nu, dnu, N)
    assert hermiticity_defect(gate_hamiltonian(p, 2)(t)) < 1e-12
    assert hermiticity_defect(exact_hamiltonian(p, t)) < 1e-12


def test_sparse_triplets_rebuild_the_matrices():
    H = gate_hamiltonian(P)
    rows, cols, vals, fidx = H.sparse()
    rebuilt = np.zeros_like(H.mats)
    rebuilt[fidx, rows, cols] = vals
    np.testing.assert_array_equal(rebuilt, H.mats)


def test_constant_fourier_hamiltonian():
    M = np.array([[1, 2], [2, -1]], dtype=complex)
    np.testing.assert_array_equal(FourierHamiltonian.constant(M)(123.0), M)


def test_reduced3_entries():
    A = reduced3(P).A
    W, eta = P.omega, P.eta
    assert A[0, 2] == -eta * W
    assert A[1, 1] == -1j * P.nu
    assert A[2, 0] == 2 * eta * W
    assert A[2, 2] == 1j * P.dnu
    np.testing.assert_array_equal(reduced3(P).c0, [1, 0, 0])


def test_reduced5_entries_and_domain():
    s = reduced5(P, 2)
    assert s.A[1, 3] == pytest.approx(2 * np.sqrt(3) * P.eta * P.omega)
    assert s.A[4, 1] == pytest.approx(-np.sqrt(2) * P.eta * P.omega)
    np.testing.assert_array_equal(s.c0, [0, 1, 0, 0, 0])
    with pytest.raises(ValueError):
        reduced5(P, 0)


def test_toy_hamiltonian_n0_matrix():
    k = np.sqrt(2) - 1
    expected = np.array([[0, 0, -1j * k], [0, 0, 1j], [1j * k, -1j, 0]])
    np.testing.assert_allclose(toy_hamiltonian(ToyParams(), 0), expected, atol=1e-15)


def test_toy_hamiltonian_n1_element():
    # <e g 0| H |g g 1> = i alpha sqrt(1)
    tp = ToyParams(alpha=0.7, kappa=0.3)
    H = toy_hamiltonian(tp, 1)
    labels = toy_subspace(1)
    i, j = labels.index(("e", "g", 0)), labels.index(("g", "g", 1))
    assert H[i, j] == pytest.approx(0.7j)
    assert hermiticity_defect(H) == 0


@pytest.mark.parametrize("n", [0, 1, 3])
def test_toy_subspace_is_invariant(n):
    N = n + 3
    H = toy_full_hamiltonian(ToyParams(1.0, 0.6), N)
    idx = [basis_index(a, b, m, N) for a, b, m in toy_subspace(n)]
    outside = np.setdiff1d(np.arange(4 * N), idx)
    assert np.all(H[np.ix_(outside, idx)] == 0)
