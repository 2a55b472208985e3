"""
Statevector backends.

Amplitude index is sum_j b_j 2^j: qubit 0 is the least significant bit.
"""
from enum import Enum
from typing import List, Optional, Sequence, Tuple
import logging
import numpy as np

from src.errors import CapacityError, DimensionError
from src.models.PauliString import PHASES, PauliString

log = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-10


class Backend(str, Enum):
    DENSE = 'dense'
    FACTORED = 'factored'
    STABILIZER = 'stabilizer'


def apply_matrix(amplitudes: np.ndarray, n: int, matrix: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """
    Apply a 2^k x 2^k matrix to k target qubits of an n-qubit array.

    Args:
        amplitudes: Array of shape (2^n,) or (2^n, m); trailing axes are batch axes
        n: Qubit count
        matrix: Operator in little-endian target order
        targets: Target qubits

    Returns:
        New array with the same shape
    """
    k = len(targets)
    psi = amplitudes.reshape([2] * n + list(amplitudes.shape[1:]))
    op = np.asarray(matrix).reshape([2] * (2 * k))
    in_axes = [n - 1 - t for t in reversed(targets)]
    out = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), in_axes))
    out = np.moveaxis(out, list(range(k)), in_axes)
    return out.reshape(amplitudes.shape)


def pauli_phases(n: int, pauli: PauliString) -> np.ndarray:
    """Phase picked up by each basis index under P: i^{|x&z|} (-1)^{|z&b|}."""
    index = np.arange(2 ** n)
    parity = np.zeros(2 ** n, dtype=np.int64)
    for q in range(n):
        if (pauli.z_mask >> q) & 1:
            parity ^= (index >> q) & 1
    base = PHASES[(pauli.x_mask & pauli.z_mask).bit_count() % 4]
    return base * (1 - 2 * parity)


class DenseState:
    backend = Backend.DENSE

    def __init__(self, n: int, amplitudes: Optional[np.ndarray] = None):
        """
        Initialize a DenseState instance.

        Args:
            n: Qubit count
            amplitudes: 2^n complex amplitudes; defaults to |0^n>
        """
        self.n = n
        if amplitudes is None:
            amplitudes = np.zeros(2 ** n, dtype=complex)
            amplitudes[0] = 1.0
        self.amplitudes = self._validate_amplitudes(n, amplitudes)

    @staticmethod
    def _validate_amplitudes(n: int, amplitudes) -> np.ndarray:
        """Validate shape and normalization."""
        amplitudes = np.array(amplitudes, dtype=complex)
        if amplitudes.shape != (2 ** n,):
            raise DimensionError(f"{n}-qubit state needs {2 ** n} amplitudes, got {amplitudes.shape}")
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1) > NORM_TOLERANCE:
            raise ValueError(f"State is not normalized (norm {norm:.12g})")
        return amplitudes

    def copy(self) -> 'DenseState':
        clone = DenseState.__new__(DenseState)
        clone.n = self.n
        clone.amplitudes = self.amplitudes.copy()
        return clone

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def apply_matrix(self, matrix: np.ndarray, targets: Sequence[int]):
        self.amplitudes = apply_matrix(self.amplitudes, self.n, matrix, targets)

    def apply_gate(self, gate):
        self.apply_matrix(gate.matrix(), gate.targets)

    def apply_pauli(self, pauli: PauliString):
        if pauli.is_identity:
            return
        index = np.arange(2 ** self.n)
        updated = np.empty_like(self.amplitudes)
        updated[index ^ pauli.x_mask] = self.amplitudes * pauli_phases(self.n, pauli)
        self.amplitudes = updated

    def expectation_pauli(self, pauli: PauliString) -> float:
        if pauli.is_identity:
            return 1.0
        index = np.arange(2 ** self.n)
        image = self.amplitudes * pauli_phases(self.n, pauli)
        return float(np.real(np.vdot(self.amplitudes[index ^ pauli.x_mask], image)))

    def sample_pauli(self, pauli: PauliString, rng: np.random.Generator) -> int:
        """One eigenvalue draw; the state is left unchanged."""
        p_plus = (1 + self.expectation_pauli(pauli)) / 2
        return 1 if rng.random() < p_plus else -1

    def sample_bitstring(self, rng: np.random.Generator) -> Tuple[int, ...]:
        probs = np.abs(self.amplitudes) ** 2
        index = int(rng.choice(2 ** self.n, p=probs / probs.sum()))
        return tuple((index >> j) & 1 for j in range(self.n))

    def to_dense(self) -> np.ndarray:
        return self.amplitudes.copy()

    def __str__(self) -> str:
        return f"DenseState(n={self.n})"


class FactoredState:
    backend = Backend.FACTORED

    def __init__(self, registers: List[Tuple[Tuple[int, ...], DenseState]], dense_cap: int):
        """
        Initialize a FactoredState instance.

        Args:
            registers: (qubits, local state) pairs; local qubit k is global qubits[k]
            dense_cap: Largest register a merge may produce
        """
        self.registers = self._validate_registers(registers)
        self.n = sum(len(q) for q, _ in self.registers)
        self.dense_cap = dense_cap

    @staticmethod
    def _validate_registers(registers):
        """Validate that the registers partition [0, n)."""
        registers = [(tuple(q), s) for q, s in registers]
        seen = sorted(q for qubits, _ in registers for q in qubits)
        if seen != list(range(len(seen))):
            raise ValueError("Registers must partition the qubits 0..n-1")
        for qubits, state in registers:
            if state.n != len(qubits):
                raise DimensionError("Register state size does not match its qubit list")
        return registers

    @classmethod
    def zero(cls, n: int, register_size: int, dense_cap: int) -> 'FactoredState':
        """|0^n> split into consecutive registers of register_size qubits."""
        registers = []
        for start in range(0, n, register_size):
            qubits = tuple(range(start, min(start + register_size, n)))
            registers.append((qubits, DenseState(len(qubits))))
        return cls(registers, dense_cap)

    def copy(self) -> 'FactoredState':
        return FactoredState([(q, s.copy()) for q, s in self.registers], self.dense_cap)

    def norm(self) -> float:
        return float(np.prod([s.norm() for _, s in self.registers]))

    def _register_of(self, qubit: int) -> int:
        for i, (qubits, _) in enumerate(self.registers):
            if qubit in qubits:
                return i
        raise DimensionError(f"Qubit {qubit} out of range for {self.n} qubits")

    def _merge(self, indices: Sequence[int]) -> int:
        """Merge registers into one; returns its position."""
        indices = sorted(set(indices))
        if len(indices) == 1:
            return indices[0]
        size = sum(len(self.registers[i][0]) for i in indices)
        if size > self.dense_cap:
            raise CapacityError(f"Merging registers would need {size} dense qubits (cap {self.dense_cap})")
        qubits: Tuple[int, ...] = ()
        amplitudes = np.ones(1, dtype=complex)
        for i in indices:
            reg_qubits, state = self.registers[i]
            # earlier registers stay the low bits
            amplitudes = np.kron(state.amplitudes, amplitudes)
            qubits += reg_qubits
        merged = DenseState.__new__(DenseState)
        merged.n = len(qubits)
        merged.amplitudes = amplitudes
        first = indices[0]
        self.registers[first] = (qubits, merged)
        for i in reversed(indices[1:]):
            del self.registers[i]
        log.debug("Merged registers into %d-qubit register %s", len(qubits), qubits)
        return first

    def apply_gate(self, gate):
        position = self._merge([self._register_of(t) for t in gate.targets])
        qubits, state = self.registers[position]
        state.apply_matrix(gate.matrix(), [qubits.index(t) for t in gate.targets])

    def apply_pauli(self, pauli: PauliString):
        for qubits, state in self.registers:
            local = pauli.restrict(qubits)
            if not local.is_identity:
                state.apply_pauli(local)

    def expectation_pauli(self, pauli: PauliString) -> float:
        # registers are independent, so a product Pauli factorizes
        value = 1.0
        for qubits, state in self.registers:
            local = pauli.restrict(qubits)
            if not local.is_identity:
                value *= state.expectation_pauli(local)
        return value

    def sample_pauli(self, pauli: PauliString, rng: np.random.Generator) -> int:
        """One eigenvalue draw; the state is left unchanged."""
        p_plus = (1 + self.expectation_pauli(pauli)) / 2
        return 1 if rng.random() < p_plus else -1

    def sample_bitstring(self, rng: np.random.Generator) -> Tuple[int, ...]:
        bits = [0] * self.n
        for qubits, state in self.registers:
            for q, bit in zip(qubits, state.sample_bitstring(rng)):
                bits[q] = bit
        return tuple(bits)

    def to_dense(self) -> np.ndarray:
        """Full 2^n amplitude vector in global qubit order."""
        qubits: Tuple[int, ...] = ()
        amplitudes = np.ones(1, dtype=complex)
        for reg_qubits, state in self.registers:
            amplitudes = np.kron(state.amplitudes, amplitudes)
            qubits += reg_qubits
        n = len(qubits)
        psi = amplitudes.reshape([2] * n)
        # axis a holds local qubit n-1-a; reorder to global qubits n-1..0
        order = [n - 1 - qubits.index(g) for g in range(n - 1, -1, -1)]
        return np.transpose(psi, order).reshape(-1)

    def __str__(self) -> str:
        sizes = [len(q) for q, _ in self.registers]
        return f"FactoredState(n={self.n}, registers={sizes})"
