"""
State preparation, evolution and measurement across the three backends.
"""
from typing import Tuple, Union
import logging
import numpy as np

from src.config import DEFAULT_DENSE_QUBIT_CAP, DEFAULT_STABILIZER_QUBIT_CAP
from src.errors import CapacityError, DimensionError, UnsupportedGateError
from src.models.CircuitSeq import CircuitSeq
from src.models.Observable import Observable
from src.models.PauliString import PauliString
from src.models.QuantumState import Backend, DenseState, FactoredState, apply_matrix
from src.models.StabilizerState import StabilizerState
from src.models.Unitary import Unitary

log = logging.getLogger(__name__)

QuantumState = Union[DenseState, FactoredState, StabilizerState]

PREP_ZERO = 'zero'
PREP_BELL_PAIRS = 'bell-pairs'


class EngineService:
    @staticmethod
    def prepare_zero(
        n: int,
        backend: Union[Backend, str],
        dense_cap: int = DEFAULT_DENSE_QUBIT_CAP,
        stabilizer_cap: int = DEFAULT_STABILIZER_QUBIT_CAP,
        register_size: int = 2
    ) -> QuantumState:
        """
        Prepare |0^n> on a backend.

        Args:
            n: Qubit count
            backend: Dense, Factored or Stabilizer
            dense_cap: Largest dense register allowed
            stabilizer_cap: Largest stabilizer state allowed
            register_size: Qubits per register for the Factored backend

        Returns:
            The prepared state

        Raises:
            CapacityError: If n exceeds the backend cap
        """
        backend = Backend(backend)
        if n < 1:
            raise ValueError(f"Qubit count must be positive, got {n}")
        if backend is Backend.DENSE:
            if n > dense_cap:
                raise CapacityError(f"Dense backend holds at most {dense_cap} qubits, got {n}")
            return DenseState(n)
        if backend is Backend.FACTORED:
            if register_size < 1 or register_size > dense_cap:
                raise CapacityError(f"Register size {register_size} outside [1, {dense_cap}]")
            return FactoredState.zero(n, register_size, dense_cap)
        if n > stabilizer_cap:
            raise CapacityError(f"Stabilizer backend holds at most {stabilizer_cap} qubits, got {n}")
        return StabilizerState(n)

    @staticmethod
    def bell_phase_circuit(n: int) -> CircuitSeq:
        """H, T, CX on each adjacent pair (2i, 2i+1)."""
        if n < 2 or n % 2:
            raise ValueError(f"Bell-phase pairs need an even qubit count, got {n}")
        circuit = CircuitSeq(n)
        for i in range(0, n, 2):
            circuit.add('H', i).add('T', i).add('CX', i, i + 1)
        return circuit

    @staticmethod
    def prepare_bell_phase_pairs(
        n: int,
        backend: Union[Backend, str],
        dense_cap: int = DEFAULT_DENSE_QUBIT_CAP
    ) -> QuantumState:
        """
        Prepare (|00> + e^{i pi/4}|11>)/sqrt(2) on every pair (2i, 2i+1).

        Raises:
            ValueError: If n is odd or the backend is Stabilizer
        """
        backend = Backend(backend)
        if backend is Backend.STABILIZER:
            raise UnsupportedGateError("Bell-phase pairs need a T gate; use the dense or factored backend")
        circuit = EngineService.bell_phase_circuit(n)
        state = EngineService.prepare_zero(n, backend, dense_cap=dense_cap, register_size=2)
        return EngineService.apply_circuit(state, circuit)

    @staticmethod
    def prepare(
        prep: Union[str, CircuitSeq],
        n: int,
        backend: Union[Backend, str],
        dense_cap: int = DEFAULT_DENSE_QUBIT_CAP,
        stabilizer_cap: int = DEFAULT_STABILIZER_QUBIT_CAP
    ) -> QuantumState:
        """
        Prepare a named state ('zero', 'bell-pairs') or run a circuit on |0^n>.
        """
        if isinstance(prep, CircuitSeq):
            if prep.n != n:
                raise DimensionError(f"Preparation circuit acts on {prep.n} qubits, expected {n}")
            state = EngineService.prepare_zero(n, backend, dense_cap=dense_cap, stabilizer_cap=stabilizer_cap)
            return EngineService.apply_circuit(state, prep)
        if prep == PREP_ZERO:
            return EngineService.prepare_zero(n, backend, dense_cap=dense_cap, stabilizer_cap=stabilizer_cap)
        if prep == PREP_BELL_PAIRS:
            return EngineService.prepare_bell_phase_pairs(n, backend, dense_cap=dense_cap)
        raise ValueError(f"Unknown preparation: {prep!r}")

    @staticmethod
    def apply_pauli(state: QuantumState, p: PauliString) -> QuantumState:
        """
        Apply a Pauli string in place.

        Raises:
            DimensionError: If p.n differs from state.n
        """
        EngineService._check_n(state, p.n)
        state.apply_pauli(p)
        return state

    @staticmethod
    def apply_circuit(state: QuantumState, circuit: CircuitSeq) -> QuantumState:
        """
        Apply gates in order, in place.

        Raises:
            UnsupportedGateError: Stabilizer backend given a non-Clifford gate
            CapacityError: A factored merge exceeds the dense cap
        """
        EngineService._check_n(state, circuit.n)
        if state.backend is Backend.STABILIZER and not circuit.is_clifford:
            bad = next(g for g in circuit if not g.is_clifford)
            raise UnsupportedGateError(f"Stabilizer backend cannot apply non-Clifford gate {bad}")
        for gate in circuit:
            state.apply_gate(gate)
        return state

    @staticmethod
    def apply_unitary(state: QuantumState, u: Unitary) -> QuantumState:
        """Apply a channel operator of any variant, in place."""
        if u.kind == Unitary.PAULI:
            return EngineService.apply_pauli(state, u.pauli)
        return EngineService.apply_circuit(state, u.as_circuit())

    @staticmethod
    def expectation(state: QuantumState, o: Union[Observable, PauliString]) -> float:
        """
        Exact <psi|O|psi>.

        Stabilizer terms evaluate to -1, 0 or +1.
        """
        if isinstance(o, PauliString):
            o = Observable.single(o)
        EngineService._check_n(state, o.n)
        return float(sum(c * state.expectation_pauli(p) for c, p in o.terms))

    @staticmethod
    def sample_pauli_eigenvalue(state: QuantumState, p: PauliString, rng: np.random.Generator) -> int:
        """
        Draw one eigenvalue of p with Born statistics.

        The Stabilizer backend measures and collapses the tableau; the dense
        backends leave the state untouched.

        Raises:
            ValueError: If p is the identity
        """
        EngineService._check_n(state, p.n)
        if p.is_identity:
            raise ValueError("Identity observable has the deterministic value 1; nothing to sample")
        return state.sample_pauli(p, rng)

    @staticmethod
    def sample_pauli_eigenvalues(
        state: QuantumState,
        p: PauliString,
        shots: int,
        rng: np.random.Generator
    ) -> np.ndarray:
        """
        Independent single-shot outcomes of p, each on a fresh copy of state.

        A stabilizer state with a random outcome is measured shot by shot on
        copies of the tableau. Otherwise the outcomes are i.i.d. with
        P(+1) = (1 + <p>)/2 and the batch is drawn from the exact expectation.
        The state itself is never changed.

        Returns:
            int8 array of +1/-1 values
        """
        EngineService._check_n(state, p.n)
        if shots < 1:
            raise ValueError(f"Shot count must be positive, got {shots}")
        if p.is_identity:
            return np.ones(shots, dtype=np.int8)
        value = state.expectation_pauli(p)
        if abs(value) >= 1.0:
            return np.full(shots, 1 if value > 0 else -1, dtype=np.int8)
        if state.backend is Backend.STABILIZER:
            return np.array(
                [EngineService.sample_pauli_eigenvalue(state.copy(), p, rng) for _ in range(shots)],
                dtype=np.int8
            )
        return np.where(rng.random(shots) < (1 + value) / 2, 1, -1).astype(np.int8)

    @staticmethod
    def sample_bitstring(state: QuantumState, rng: np.random.Generator) -> Tuple[int, ...]:
        """Computational-basis sample; collapses Stabilizer states."""
        return state.sample_bitstring(rng)

    @staticmethod
    def to_dense(state: QuantumState) -> np.ndarray:
        """Amplitude vector of a Dense or Factored state."""
        if state.backend is Backend.STABILIZER:
            raise UnsupportedGateError("Stabilizer states carry no amplitudes")
        return state.to_dense()

    @staticmethod
    def circuit_matrix(circuit: CircuitSeq, cap: int = DEFAULT_DENSE_QUBIT_CAP) -> np.ndarray:
        """Exact 2^n x 2^n unitary of a circuit."""
        if circuit.n > cap:
            raise CapacityError(f"Circuit on {circuit.n} qubits exceeds the matrix cap of {cap}")
        matrix = np.eye(2 ** circuit.n, dtype=complex)
        for gate in circuit:
            matrix = apply_matrix(matrix, circuit.n, gate.matrix(), gate.targets)
        return matrix

    @staticmethod
    def _check_n(state: QuantumState, n: int):
        if state.n != n:
            raise DimensionError(f"Operand acts on {n} qubits but the state has {state.n}")
