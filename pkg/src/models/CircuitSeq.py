from typing import Dict, Iterable, Iterator, List, Optional

from src.errors import DimensionError
from src.models.Gate import Gate
from src.models.PauliString import PauliString


class CircuitSeq:
    def __init__(self, n: int, gates: Optional[Iterable[Gate]] = None):
        """
        Initialize a CircuitSeq instance.

        Args:
            n: Qubit count (0 allowed for the empty ancilla register)
            gates: Gates in application order
        """
        self.n = self._validate_n(n)
        self.gates: List[Gate] = []
        for gate in gates or []:
            self.append(gate)

    @staticmethod
    def _validate_n(n: int) -> int:
        """Validate qubit count."""
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise ValueError(f"Qubit count must be a non-negative integer, got {n!r}")
        return n

    def append(self, gate: Gate) -> 'CircuitSeq':
        """Append a gate, checking its targets fit."""
        if not isinstance(gate, Gate):
            raise ValueError("Circuits hold Gate objects only")
        if max(gate.targets) >= self.n:
            raise DimensionError(f"Gate {gate} targets a qubit outside a {self.n}-qubit circuit")
        self.gates.append(gate)
        return self

    def add(self, kind: str, *targets: int, theta: Optional[float] = None) -> 'CircuitSeq':
        """Append a named gate."""
        return self.append(Gate(kind, targets, theta=theta))

    def then(self, other: 'CircuitSeq') -> 'CircuitSeq':
        """New circuit: this one followed by other."""
        if other.n != self.n:
            raise DimensionError(f"Cannot concatenate circuits on {self.n} and {other.n} qubits")
        return CircuitSeq(self.n, self.gates + other.gates)

    @classmethod
    def from_pauli(cls, pauli: PauliString) -> 'CircuitSeq':
        """One X/Y/Z gate per non-identity position."""
        circuit = cls(pauli.n)
        for q in pauli.support:
            circuit.add(pauli.code(q), q)
        return circuit

    @property
    def is_clifford(self) -> bool:
        return all(g.is_clifford for g in self.gates)

    @property
    def has_dense(self) -> bool:
        return any(g.kind == 'DENSE' for g in self.gates)

    def key(self) -> str:
        """Canonical text of the gate list."""
        return f"{self.n}:" + ';'.join(str(g) for g in self.gates)

    def to_dict(self) -> Dict:
        """Convert circuit to dictionary."""
        return {'n': self.n, 'gates': [g.to_dict() for g in self.gates]}

    @classmethod
    def from_dict(cls, data: Dict) -> 'CircuitSeq':
        """Create a CircuitSeq from a dictionary."""
        return cls(data['n'], [Gate.from_dict(g) for g in data.get('gates', [])])

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CircuitSeq):
            return False
        return self.n == other.n and self.gates == other.gates

    def __str__(self) -> str:
        return f"CircuitSeq(n={self.n}, gates={len(self.gates)})"
