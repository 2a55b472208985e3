"""
Tests for the Gate and CircuitSeq models.
"""
import numpy as np
import pytest

from src.errors import DimensionError
from src.models.CircuitSeq import CircuitSeq
from src.models.Gate import Gate, parse_complex_matrix
from src.models.PauliString import PauliString


def test_gate_creation():
    """Test creating named gates."""
    gate = Gate('cx', [0, 2])

    assert gate.kind == 'CX'
    assert gate.targets == (0, 2)
    assert gate.is_clifford
    assert not Gate('T', [0]).is_clifford


@pytest.mark.parametrize('kind,targets,theta', [
    ('FOO', [0], None),
    ('H', [0, 1], None),
    ('CX', [1, 1], None),
    ('RX', [0], None),
    ('H', [0], 0.5),
    ('H', [-1], None),
])
def test_gate_invalid(kind, targets, theta):
    """Test rejected kinds, arities, targets and angles."""
    with pytest.raises(ValueError):
        Gate(kind, targets, theta=theta)


def test_rotation_matrices():
    """Test RY and RZZ matrices against their closed forms."""
    theta = 0.7
    ry = Gate('RY', [0], theta=theta).matrix()
    rzz = Gate('RZZ', [0, 1], theta=theta).matrix()

    np.testing.assert_allclose(ry @ np.array([1, 0]), [np.cos(theta / 2), np.sin(theta / 2)])
    zz = np.diag([1, -1, -1, 1])
    np.testing.assert_allclose(rzz, np.diag(np.exp(-0.5j * theta * np.diag(zz))))


def test_dense_gate_validation():
    """Test that dense gates need a unitary of the right size."""
    with pytest.raises(ValueError, match="not unitary"):
        Gate.dense([[1, 1], [0, 1]], [0])
    with pytest.raises(DimensionError):
        Gate.dense(np.eye(4), [0])
    with pytest.raises(ValueError, match="1 to 3"):
        Gate.dense(np.eye(16), [0, 1, 2, 3])


def test_gate_to_dict_from_dict():
    """Test converting gates to and from dictionaries."""
    gates = [
        Gate('RZ', [1], theta=0.25),
        Gate.dense(np.array([[0, 1j], [1j, 0]]), [0]),
    ]
    for gate in gates:
        assert Gate.from_dict(gate.to_dict()) == gate

    with pytest.raises(ValueError, match="Unknown gate field"):
        Gate.from_dict({'kind': 'H', 'targets': [0], 'colour': 'red'})


def test_parse_complex_matrix():
    """Test real and [re, im] entries."""
    matrix = parse_complex_matrix([[1, [0, 1]], [0.5, [2, -1]]])

    assert matrix[0, 1] == 1j
    assert matrix[1, 1] == 2 - 1j
    with pytest.raises(ValueError, match="different lengths"):
        parse_complex_matrix([[1, 0], [1]])


def test_circuit_append_checks_targets():
    """Test that gates must fit inside the circuit."""
    circuit = CircuitSeq(2).add('H', 0).add('CX', 0, 1)

    assert len(circuit) == 2
    assert circuit.is_clifford
    with pytest.raises(DimensionError):
        circuit.add('X', 2)


def test_circuit_then_and_key():
    """Test concatenation and canonical keys."""
    a = CircuitSeq(2).add('H', 0)
    b = CircuitSeq(2).add('RZ', 1, theta=0.5)
    joined = a.then(b)

    assert joined.key() == '2:H[0];RZ(0.5)[1]'
    assert not joined.is_clifford
    with pytest.raises(DimensionError):
        a.then(CircuitSeq(3))


def test_circuit_from_pauli():
    """Test one gate per non-identity position."""
    circuit = CircuitSeq.from_pauli(PauliString.from_text('XIZ'))

    assert [str(g) for g in circuit] == ['X[0]', 'Z[2]']


def test_circuit_to_dict_from_dict():
    """Test converting a circuit to and from a dictionary."""
    circuit = CircuitSeq(3).add('H', 0).add('CX', 0, 2).add('RX', 1, theta=1.5)

    assert CircuitSeq.from_dict(circuit.to_dict()) == circuit
