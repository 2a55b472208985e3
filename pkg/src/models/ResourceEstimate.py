from typing import Dict

HYBRID_VARIANCE = "(sum_i p_i <O^2>_i - <O>^2) / N"
STINESPRING_VARIANCE = "(<O^2> - <O>^2) / N"


class ResourceEstimate:
    def __init__(
        self,
        method: str,
        qubits: int,
        depth_lower_bound: int,
        circuits: int,
        controlled_op_count: int,
        controls_per_op: int,
        variance_formula: str
    ):
        """
        Initialize a ResourceEstimate instance.

        Args:
            method: 'ancilla' or 'hybrid'
            qubits: Qubits the method needs
            depth_lower_bound: Depth in multiplexed segments
            circuits: Distinct circuits executed
            controlled_op_count: Controlled operator blocks
            controls_per_op: Controls on each block
            variance_formula: Estimator variance expression
        """
        self.method = self._validate_method(method)
        self.qubits = qubits
        self.depth_lower_bound = depth_lower_bound
        self.circuits = circuits
        self.controlled_op_count = controlled_op_count
        self.controls_per_op = controls_per_op
        self.variance_formula = variance_formula

    @staticmethod
    def _validate_method(method: str) -> str:
        if method not in ('ancilla', 'hybrid'):
            raise ValueError(f"Unknown method: {method!r}")
        return method

    def to_dict(self) -> Dict:
        return {
            'method': self.method,
            'qubits': self.qubits,
            'depth_lower_bound': self.depth_lower_bound,
            'circuits': self.circuits,
            'controlled_op_count': self.controlled_op_count,
            'controls_per_op': self.controls_per_op,
            'variance_formula': self.variance_formula
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ResourceEstimate):
            return False
        return self.to_dict() == other.to_dict()

    def __str__(self) -> str:
        return f"ResourceEstimate({self.method}: qubits={self.qubits}, depth>={self.depth_lower_bound}, circuits={self.circuits})"
