from typing import Dict, List, Sequence, Tuple

from src.models.CircuitSeq import CircuitSeq
from src.models.Unitary import Unitary


def ancilla_count(m: int) -> int:
    """ceil(log2 m) for m >= 1."""
    if m < 1:
        raise ValueError(f"Need at least one term, got {m}")
    return (m - 1).bit_length()


class DilatedCircuit:
    def __init__(
        self,
        n_target: int,
        probs: Sequence[float],
        prep: CircuitSeq,
        multiplexer: Sequence[Tuple[int, Unitary]]
    ):
        """
        Initialize a DilatedCircuit instance.

        Target qubits are 0..n_target-1; ancilla qubit j is qubit n_target + j
        of the joint register, and pattern i selects ancilla basis state |i>.

        Args:
            n_target: Target qubit count
            probs: Term weights p_i
            prep: Circuit on the ancillas preparing sum_i sqrt(p_i) |i>
            multiplexer: (control pattern, operator on the target) per term
        """
        self.n_target = n_target
        self.probs = [float(p) for p in probs]
        self.n_ancilla = ancilla_count(len(self.probs))
        self.prep = self._validate_prep(prep, self.n_ancilla)
        self.multiplexer: List[Tuple[int, Unitary]] = self._validate_multiplexer(
            multiplexer, len(self.probs), self.n_ancilla, n_target
        )

    @staticmethod
    def _validate_prep(prep: CircuitSeq, n_ancilla: int) -> CircuitSeq:
        if prep.n != n_ancilla:
            raise ValueError(f"Ancilla preparation acts on {prep.n} qubits, expected {n_ancilla}")
        return prep

    @staticmethod
    def _validate_multiplexer(multiplexer, m: int, n_ancilla: int, n_target: int) -> List[Tuple[int, Unitary]]:
        """Exactly m entries with distinct in-range patterns and target-sized operators."""
        entries = [(int(pattern), u) for pattern, u in multiplexer]
        if len(entries) != m:
            raise ValueError(f"Multiplexer needs {m} entries, got {len(entries)}")
        patterns = [pattern for pattern, _ in entries]
        if len(set(patterns)) != m:
            raise ValueError("Multiplexer control patterns must be distinct")
        if any(not 0 <= pattern < 2 ** n_ancilla for pattern in patterns):
            raise ValueError(f"Control patterns must lie in [0, {2 ** n_ancilla})")
        if any(u.n != n_target for _, u in entries):
            raise ValueError(f"Multiplexed operators must act on {n_target} qubits")
        return entries

    @property
    def total_qubits(self) -> int:
        return self.n_target + self.n_ancilla

    def to_dict(self) -> Dict:
        return {
            'n_target': self.n_target,
            'n_ancilla': self.n_ancilla,
            'prep': self.prep.to_dict(),
            'multiplexer': [{'pattern': pattern, 'p': p, 'op': u.label()}
                            for (pattern, u), p in zip(self.multiplexer, self.probs)]
        }

    def __len__(self) -> int:
        return len(self.multiplexer)

    def __str__(self) -> str:
        return f"DilatedCircuit(n_target={self.n_target}, n_ancilla={self.n_ancilla}, terms={len(self)})"
