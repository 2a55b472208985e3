"""
Tests for the EngineService class and the three backends.
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.errors import CapacityError, DimensionError, UnsupportedGateError
from src.models.CircuitSeq import CircuitSeq
from src.models.Gate import Gate
from src.models.Observable import Observable
from src.models.PauliString import PauliString
from src.models.QuantumState import Backend, DenseState
from src.models.Unitary import Unitary
from src.services.EngineService import EngineService

SQ2 = 1 / np.sqrt(2)


@st.composite
def clifford_circuits(draw, n):
    """Random circuits over H, S, X, Y, Z and CX."""
    circuit = CircuitSeq(n)
    for _ in range(draw(st.integers(min_value=0, max_value=20))):
        kind = draw(st.sampled_from(['H', 'S', 'X', 'Y', 'Z', 'CX']))
        if kind == 'CX':
            control, target = draw(st.permutations(range(n)))[:2]
            circuit.add('CX', control, target)
        else:
            circuit.add(kind, draw(st.integers(min_value=0, max_value=n - 1)))
    return circuit


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_stabilizer_matches_dense(data):
    """Test that tableau expectations equal statevector expectations on Clifford circuits."""
    n = data.draw(st.integers(min_value=2, max_value=4))
    circuit = data.draw(clifford_circuits(n))
    pauli = PauliString.from_text(data.draw(st.text(alphabet='IXYZ', min_size=n, max_size=n)))

    tableau = EngineService.apply_circuit(EngineService.prepare_zero(n, Backend.STABILIZER), circuit)
    dense = EngineService.apply_circuit(EngineService.prepare_zero(n, Backend.DENSE), circuit)

    assert EngineService.expectation(tableau, pauli) == pytest.approx(
        EngineService.expectation(dense, pauli), abs=1e-9
    )


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_pauli_application_matches_circuit(data):
    """Test that the Pauli fast path equals applying the gates one by one."""
    n = data.draw(st.integers(min_value=1, max_value=4))
    circuit = data.draw(clifford_circuits(n)) if n > 1 else CircuitSeq(1).add('H', 0)
    pauli = PauliString.from_text(data.draw(st.text(alphabet='IXYZ', min_size=n, max_size=n)))

    for backend in (Backend.DENSE, Backend.STABILIZER):
        base = EngineService.apply_circuit(EngineService.prepare_zero(n, backend), circuit)
        fast = EngineService.apply_pauli(base.copy(), pauli)
        gated = EngineService.apply_circuit(base.copy(), CircuitSeq.from_pauli(pauli))
        for code in ('X', 'Y', 'Z'):
            single = PauliString.single(n, 0, code)
            assert EngineService.expectation(fast, single) == pytest.approx(
                EngineService.expectation(gated, single), abs=1e-9
            )


def test_bell_phase_pairs_expectations():
    """Test the prepared pair (|00> + e^{i pi/4}|11>)/sqrt(2)."""
    for backend in (Backend.DENSE, Backend.FACTORED):
        state = EngineService.prepare_bell_phase_pairs(4, backend)

        assert EngineService.expectation(state, PauliString.from_text('XXII')) == pytest.approx(SQ2)
        assert EngineService.expectation(state, PauliString.from_text('IIYY')) == pytest.approx(-SQ2)
        assert EngineService.expectation(state, PauliString.from_text('ZZZZ')) == pytest.approx(1.0)
        assert EngineService.expectation(state, PauliString.from_text('ZIII')) == pytest.approx(0.0)


def test_bell_phase_pairs_rejected_on_stabilizer():
    """Test that the T gate keeps the pairs off the tableau backend."""
    with pytest.raises(UnsupportedGateError):
        EngineService.prepare_bell_phase_pairs(2, Backend.STABILIZER)
    with pytest.raises(ValueError, match="even"):
        EngineService.bell_phase_circuit(3)


def test_factored_merge_matches_dense():
    """Test that a cross-register gate merges registers and keeps the state exact."""
    circuit = CircuitSeq(6).add('H', 1).add('T', 1).add('CX', 1, 4).add('RY', 2, theta=0.4).add('CX', 5, 0)
    factored = EngineService.apply_circuit(EngineService.prepare_zero(6, Backend.FACTORED), circuit)
    dense = EngineService.apply_circuit(EngineService.prepare_zero(6, Backend.DENSE), circuit)

    assert len(factored.registers) == 2

    np.testing.assert_allclose(EngineService.to_dense(factored), EngineService.to_dense(dense), atol=1e-12)
    assert factored.norm() == pytest.approx(1.0)


def test_factored_merge_capacity():
    """Test that merges beyond the dense cap are refused."""
    state = EngineService.prepare_zero(6, Backend.FACTORED, dense_cap=4, register_size=2)
    state.apply_gate(Gate('CX', [0, 2]))

    with pytest.raises(CapacityError):
        state.apply_gate(Gate('CX', [0, 4]))


def test_prepare_capacity():
    """Test the dense and stabilizer caps."""
    with pytest.raises(CapacityError):
        EngineService.prepare_zero(5, Backend.DENSE, dense_cap=4)
    with pytest.raises(CapacityError):
        EngineService.prepare_zero(10, Backend.STABILIZER, stabilizer_cap=8)


def test_stabilizer_rejects_non_clifford():
    """Test that T gates are refused by the tableau backend."""
    state = EngineService.prepare_zero(1, Backend.STABILIZER)

    with pytest.raises(UnsupportedGateError):
        EngineService.apply_circuit(state, CircuitSeq(1).add('T', 0))


def test_dimension_mismatch():
    """Test that operands must match the state size."""
    state = EngineService.prepare_zero(2, Backend.DENSE)

    with pytest.raises(DimensionError):
        EngineService.apply_pauli(state, PauliString.from_text('XXX'))


def test_stabilizer_measurement_collapses(rng):
    """Test that a random Z outcome repeats on a second measurement."""
    for _ in range(20):
        state = EngineService.apply_circuit(
            EngineService.prepare_zero(2, Backend.STABILIZER), CircuitSeq(2).add('H', 0).add('CX', 0, 1)
        )
        first = EngineService.sample_pauli_eigenvalue(state, PauliString.from_text('ZI'), rng)
        assert EngineService.sample_pauli_eigenvalue(state, PauliString.from_text('ZI'), rng) == first
        # the Bell partner agrees
        assert EngineService.sample_pauli_eigenvalue(state, PauliString.from_text('IZ'), rng) == first
        assert EngineService.expectation(state, PauliString.from_text('ZZ')) == 1.0


def test_stabilizer_bell_signs():
    """Test deterministic signs on the Bell state."""
    state = EngineService.apply_circuit(
        EngineService.prepare_zero(2, Backend.STABILIZER), CircuitSeq(2).add('H', 0).add('CX', 0, 1)
    )

    assert EngineService.expectation(state, PauliString.from_text('XX')) == 1.0
    assert EngineService.expectation(state, PauliString.from_text('YY')) == -1.0
    assert EngineService.expectation(state, PauliString.from_text('XI')) == 0.0


def test_sample_identity_refused(rng):
    """Test that the identity has nothing to sample."""
    state = EngineService.prepare_zero(2, Backend.DENSE)

    with pytest.raises(ValueError, match="Identity"):
        EngineService.sample_pauli_eigenvalue(state, PauliString.identity(2), rng)


def test_sample_pauli_eigenvalues_mean(rng):
    """Test the batch draw against the exact expectation."""
    state = EngineService.apply_circuit(
        EngineService.prepare_zero(1, Backend.DENSE), CircuitSeq(1).add('RY', 0, theta=1.0)
    )
    exact = np.cos(1.0)
    outcomes = EngineService.sample_pauli_eigenvalues(state, PauliString.from_text('Z'), 20000, rng)

    assert set(np.unique(outcomes)) <= {-1, 1}
    assert abs(outcomes.mean() - exact) < 4 * np.sqrt((1 - exact ** 2) / 20000)


def test_sample_pauli_eigenvalues_stabilizer_measures_copies(rng):
    """Test random tableau outcomes drawn shot by shot without touching the state."""
    state = EngineService.prepare_zero(2, Backend.STABILIZER)
    outcomes = EngineService.sample_pauli_eigenvalues(state, PauliString.from_text('XI'), 4000, rng)

    assert set(np.unique(outcomes)) == {-1, 1}
    assert abs(outcomes.mean()) < 4 * np.sqrt(1 / 4000)
    assert EngineService.expectation(state, PauliString.from_text('ZI')) == 1.0
    assert EngineService.expectation(state, PauliString.from_text('XI')) == 0.0


def test_sample_pauli_eigenvalues_deterministic(rng):
    """Test that a definite sign needs no randomness on any backend."""
    circuit = CircuitSeq(2).add('X', 1)
    for backend in Backend:
        state = EngineService.apply_circuit(EngineService.prepare_zero(2, backend), circuit)
        outcomes = EngineService.sample_pauli_eigenvalues(state, PauliString.from_text('ZZ'), 50, rng)
        assert outcomes.tolist() == [-1] * 50


@pytest.mark.slow
@pytest.mark.parametrize('backend', [Backend.DENSE, Backend.FACTORED])
def test_norm_drift_over_long_circuit(backend):
    """Test that 10^4 random gates keep the state normalized."""
    gen = np.random.default_rng(314)
    n = 4
    state = EngineService.prepare_zero(n, backend)
    for _ in range(10000):
        kind = ('H', 'T', 'RY', 'CX')[int(gen.integers(4))]
        if kind == 'CX':
            a, b = (int(q) for q in gen.choice(n, size=2, replace=False))
            gate = Gate(kind, (a, b))
        elif kind == 'RY':
            gate = Gate(kind, (int(gen.integers(n)),), theta=float(gen.uniform(0, 2 * np.pi)))
        else:
            gate = Gate(kind, (int(gen.integers(n)),))
        EngineService.apply_circuit(state, CircuitSeq(n, [gate]))

    assert state.norm() == pytest.approx(1.0, abs=1e-9)
    assert np.linalg.norm(EngineService.to_dense(state)) == pytest.approx(1.0, abs=1e-9)


def test_sample_bitstring_basis_state(rng):
    """Test sampling a basis state on every backend."""
    circuit = CircuitSeq(3).add('X', 0).add('X', 2)
    for backend in Backend:
        state = EngineService.apply_circuit(EngineService.prepare_zero(3, backend), circuit)
        assert EngineService.sample_bitstring(state, rng) == (1, 0, 1)


def test_apply_unitary_dense_operator():
    """Test a dense channel operator on a chosen target."""
    u = Unitary.from_matrix(np.array([[0, 1], [1, 0]]), n=2, targets=[1])
    state = EngineService.apply_unitary(EngineService.prepare_zero(2, Backend.DENSE), u)

    assert EngineService.expectation(state, PauliString.from_text('IZ')) == pytest.approx(-1.0)
    assert EngineService.expectation(state, PauliString.from_text('ZI')) == pytest.approx(1.0)


def test_expectation_multi_term():
    """Test a two-term observable."""
    state = EngineService.prepare_zero(2, Backend.DENSE)
    observable = Observable([(0.5, PauliString.from_text('ZI')), (-2.0, PauliString.from_text('XI'))])

    assert EngineService.expectation(state, observable) == pytest.approx(0.5)


def test_circuit_matrix():
    """Test the unitary of a short circuit."""
    matrix = EngineService.circuit_matrix(CircuitSeq(2).add('CX', 0, 1))

    np.testing.assert_allclose(matrix, Gate('CX', [0, 1]).matrix())
    with pytest.raises(CapacityError):
        EngineService.circuit_matrix(CircuitSeq(3), cap=2)


def test_dense_state_normalization():
    """Test that unnormalized amplitudes are rejected."""
    with pytest.raises(ValueError, match="normalized"):
        DenseState(1, np.array([1, 1]))
