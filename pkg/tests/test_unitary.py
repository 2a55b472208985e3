"""
Tests for the Unitary and Observable models.
"""
import numpy as np
import pytest

from src.errors import DimensionError
from src.models.CircuitSeq import CircuitSeq
from src.models.Gate import Gate
from src.models.Observable import Observable
from src.models.PauliString import PauliString
from src.models.Unitary import Unitary

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def test_pauli_unitary():
    """Test key, label and Clifford flag of a Pauli operator."""
    u = Unitary.from_pauli(PauliString.from_text('XZ'))

    assert u.key() == 'XZ'
    assert u.label() == 'XZ'
    assert u.is_clifford


def test_circuit_unitary_key():
    """Test that gate circuits group by their canonical text."""
    circuit = CircuitSeq(2, [Gate('H', [0]), Gate('RZ', [1], theta=0.5)])
    u = Unitary.from_circuit(circuit)

    assert u.key() == circuit.key()
    assert not u.is_clifford
    assert u.label() == 'circuit[2 gates]'


def test_dense_unitary():
    """Test a dense operator embedded in a larger register."""
    u = Unitary.from_matrix(H, n=3, targets=[2])

    assert u.n == 3
    assert u.key() is None
    assert u.label() == 'dense[2]'
    assert not u.is_clifford
    assert len(u.as_circuit()) == 1


@pytest.mark.parametrize("matrix", [np.eye(3), np.eye(16), np.zeros((2, 4))])
def test_dense_unitary_bad_shape(matrix):
    """Test that dense operators are limited to 2^k x 2^k with k <= 3."""
    with pytest.raises(DimensionError, match="2\\^k x 2\\^k"):
        Unitary.from_matrix(matrix)


def test_dense_unitary_target_outside_register():
    """Test a target beyond the system size."""
    with pytest.raises(DimensionError, match="outside 2 qubits"):
        Unitary.from_matrix(H, n=2, targets=[2])


def test_unknown_unitary_kind():
    """Test the kind check."""
    with pytest.raises(ValueError, match="Unknown unitary kind"):
        Unitary('sparse', 1)


def test_observable_trace_and_matrix():
    """Test Tr[O] and the dense matrix of a two-term observable."""
    obs = Observable([(0.5, PauliString.identity(2)), (2.0, PauliString.from_text('ZZ'))])

    assert obs.n == 2
    assert obs.trace() == pytest.approx(2.0)
    assert obs.norm_bound == 2.5
    np.testing.assert_allclose(obs.to_matrix(), np.diag([2.5, -1.5, -1.5, 2.5]))
    assert str(obs) == '0.5*II + 2*ZZ'


def test_observable_single():
    """Test the single-term constructor and its dictionary form."""
    obs = Observable.single('ZI', coefficient=-1)

    assert obs.is_single_term
    assert obs.to_dict() == {'terms': [{'coefficient': -1.0, 'pauli': 'ZI'}]}
    assert Observable.from_dict(obs.to_dict()) == obs


@pytest.mark.parametrize("terms, error, message", [
    ([], ValueError, "at least one term"),
    ([(1j, PauliString.from_text('Z'))], ValueError, "must be real"),
    ([(1.0, 'Z')], ValueError, "PauliString"),
    ([(1.0, PauliString.from_text('Z')), (1.0, PauliString.from_text('ZZ'))], DimensionError, "different qubit counts"),
])
def test_observable_invalid(terms, error, message):
    """Test rejected observables."""
    with pytest.raises(error, match=message):
        Observable(terms)
