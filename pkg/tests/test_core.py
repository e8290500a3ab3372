import numpy as np
import pytest

from msgate.core import (
    GateParams,
    annihilation,
    basis_index,
    basis_state,
    basis_unindex,
    hermiticity_defect,
)


@pytest.mark.parametrize("N", [2, 3, 4, 7, 16])
def test_basis_index_is_a_bijection(N):
    seen = set()
    for a in "ge":
        for b in "ge":
            for n in range(N):
                i = basis_index(a, b, n, N)
                assert 0 <= i < 4 * N
                assert basis_unindex(i, N) == ("ge".index(a), "ge".index(b), n)
                seen.add(i)
    assert seen == set(range(4 * N))


def test_basis_index_examples():
    assert basis_index("g", "g", 0, 2) == 0
    assert basis_index("g", "e", 1, 2) == 3
    assert basis_index("e", "e", 1, 2) == 7
    assert basis_index(1, 0, 3, 4) == 11


@pytest.mark.parametrize("args", [("g", "g", 4, 4), ("g", "g", -1, 4), ("x", "g", 0, 4)])
def test_basis_index_rejects_bad_input(args):
    with pytest.raises(ValueError):
        basis_index(*args)


def test_basis_state_is_unit_vector():
    psi = basis_state("e", "g", 1, 3)
    assert psi.shape == (12,)
    assert psi[basis_index("e", "g", 1, 3)] == 1
    assert np.linalg.norm(psi) == 1


def test_annihilation_entries():
    a = annihilation(3)
    expected = np.array([[0, 1, 0], [0, 0, np.sqrt(2)], [0, 0, 0]])
    np.testing.assert_allclose(a, expected)


def test_number_operator_is_diagonal_range():
    a = annihilation(5)
    np.testing.assert_allclose(a.conj().T @ a, np.diag(np.arange(5.0)))


def test_annihilation_needs_two_levels():
    with pytest.raises(ValueError):
        annihilation(1)


def test_hermiticity_defect():
    assert hermiticity_defect(np.array([[1, 2j], [-2j, 3]])) == 0
    assert hermiticity_defect(np.array([[0, 1], [0, 0]])) == 1
    with pytest.raises(ValueError):
        hermiticity_defect(np.zeros((2, 3)))


def test_gate_params_defaults_and_validation():
    p = GateParams()
    assert (p.omega, p.eta, p.nu, p.dnu, p.phonon_dim) == (0.1, 0.025, 5.0, 0.025, 4)
    assert p.detuning == 5.025 and p.dim == 16
    assert p.replace(phonon_dim=6).dim == 24
    for bad in (dict(omega=0), dict(nu=-1), dict(dnu=0), dict(eta=0.6), dict(phonon_dim=1)):
        with pytest.raises(ValueError):
            GateParams(**bad)
