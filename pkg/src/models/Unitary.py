from typing import Iterable, Optional
import numpy as np

from src.errors import DimensionError
from src.models.CircuitSeq import CircuitSeq
from src.models.Gate import Gate
from src.models.PauliString import PauliString


class Unitary:
    """A channel operator: a Pauli string, a circuit, or a dense matrix on up to 3 qubits."""

    PAULI = 'pauli'
    CIRCUIT = 'circuit'
    DENSE = 'dense'

    def __init__(
        self,
        kind: str,
        n: int,
        pauli: Optional[PauliString] = None,
        circuit: Optional[CircuitSeq] = None,
        gate: Optional[Gate] = None
    ):
        """
        Initialize a Unitary instance. Prefer the from_* constructors.

        Args:
            kind: PAULI, CIRCUIT or DENSE
            n: Qubit count of the system it acts on
            pauli: Payload for PAULI
            circuit: Payload for CIRCUIT
            gate: Dense gate payload for DENSE
        """
        if kind not in (self.PAULI, self.CIRCUIT, self.DENSE):
            raise ValueError(f"Unknown unitary kind: {kind!r}")
        self.kind = kind
        self.n = n
        self.pauli = pauli
        self.circuit = circuit
        self.gate = gate

    @classmethod
    def from_pauli(cls, pauli: PauliString) -> 'Unitary':
        return cls(cls.PAULI, pauli.n, pauli=pauli)

    @classmethod
    def from_circuit(cls, circuit: CircuitSeq) -> 'Unitary':
        return cls(cls.CIRCUIT, circuit.n, circuit=circuit)

    @classmethod
    def from_matrix(cls, matrix, n: Optional[int] = None, targets: Optional[Iterable[int]] = None) -> 'Unitary':
        """
        Dense operator on up to 3 qubits.

        Args:
            matrix: 2^k x 2^k unitary
            n: System qubit count (defaults to k)
            targets: Qubits it acts on (defaults to 0..k-1)
        """
        matrix = np.asarray(matrix, dtype=complex)
        k = int(round(np.log2(matrix.shape[0]))) if matrix.ndim == 2 and matrix.shape[0] > 0 else 0
        if k < 1 or k > 3 or matrix.shape != (2 ** k, 2 ** k):
            raise DimensionError(f"Dense operators must be 2^k x 2^k with 1 <= k <= 3, got {matrix.shape}")
        targets = tuple(range(k)) if targets is None else tuple(targets)
        n = k if n is None else n
        gate = Gate.dense(matrix, targets)
        if max(targets) >= n:
            raise DimensionError(f"Dense operator targets {targets} outside {n} qubits")
        return cls(cls.DENSE, n, gate=gate)

    @property
    def is_clifford(self) -> bool:
        if self.kind == self.PAULI:
            return True
        if self.kind == self.CIRCUIT:
            return self.circuit.is_clifford
        return False

    def as_circuit(self) -> CircuitSeq:
        """The operator as a gate sequence."""
        if self.kind == self.PAULI:
            return CircuitSeq.from_pauli(self.pauli)
        if self.kind == self.CIRCUIT:
            return self.circuit
        return CircuitSeq(self.n, [self.gate])

    def key(self) -> Optional[str]:
        """
        Grouping key for shot allocation; None for operators that are never grouped.
        """
        if self.kind == self.PAULI:
            return self.pauli.to_text()
        if self.kind == self.CIRCUIT and not self.circuit.has_dense:
            return self.circuit.key()
        return None

    def label(self) -> str:
        """Short human-readable id."""
        if self.kind == self.PAULI:
            return self.pauli.to_text()
        if self.kind == self.CIRCUIT:
            return f"circuit[{len(self.circuit)} gates]"
        return f"dense{list(self.gate.targets)}"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Unitary) or self.kind != other.kind or self.n != other.n:
            return False
        if self.kind == self.PAULI:
            return self.pauli == other.pauli
        if self.kind == self.CIRCUIT:
            return self.circuit == other.circuit
        return self.gate == other.gate

    def __str__(self) -> str:
        return f"Unitary({self.label()})"
