"""
Gate model: a named or dense unitary acting on a few target qubits.
"""
from typing import Dict, Iterable, Optional, Tuple
import numpy as np

from src.errors import DimensionError

UNITARY_TOLERANCE = 1e-10

# kind -> number of targets; DENSE takes 1 to 3 targets
GATE_ARITY = {
    'H': 1, 'S': 1, 'T': 1, 'X': 1, 'Y': 1, 'Z': 1,
    'RX': 1, 'RY': 1, 'RZ': 1,
    'CX': 2, 'RZZ': 2,
    'DENSE': None,
}
PARAMETRIC = {'RX', 'RY', 'RZ', 'RZZ'}
CLIFFORD = {'H', 'S', 'X', 'Y', 'Z', 'CX'}

_SQ2 = 1 / np.sqrt(2)
_FIXED = {
    'H': np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    'S': np.array([[1, 0], [0, 1j]], dtype=complex),
    'T': np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
    # targets (control, target); index b_control + 2 b_target
    'CX': np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex),
}


class Gate:
    def __init__(
        self,
        kind: str,
        targets: Iterable[int],
        theta: Optional[float] = None,
        matrix: Optional[np.ndarray] = None
    ):
        """
        Initialize a Gate instance.

        Multi-qubit matrices use the little-endian target order: row index
        sum_k b_{targets[k]} 2^k.

        Args:
            kind: One of H, S, T, X, Y, Z, RX, RY, RZ, CX, RZZ, DENSE
            targets: Target qubit indices (CX: control first)
            theta: Rotation angle in radians for RX, RY, RZ, RZZ
            matrix: Unitary for DENSE gates
        """
        self.kind = self._validate_kind(kind)
        self.targets = self._validate_targets(self.kind, targets, matrix)
        self.theta = self._validate_theta(self.kind, theta)
        self._matrix = self._validate_matrix(self.kind, matrix, len(self.targets))

    @staticmethod
    def _validate_kind(kind: str) -> str:
        """Validate gate kind."""
        if not isinstance(kind, str) or kind.upper() not in GATE_ARITY:
            raise ValueError(f"Unknown gate kind: {kind!r}")
        return kind.upper()

    @staticmethod
    def _validate_targets(kind: str, targets, matrix) -> Tuple[int, ...]:
        """Validate target count and distinctness."""
        targets = tuple(int(t) for t in targets)
        arity = GATE_ARITY[kind]
        if arity is None:
            if not 1 <= len(targets) <= 3:
                raise ValueError("Dense gates act on 1 to 3 qubits")
        elif len(targets) != arity:
            raise ValueError(f"{kind} gate takes {arity} target(s), got {len(targets)}")
        if len(set(targets)) != len(targets):
            raise ValueError(f"Gate targets must be distinct, got {targets}")
        if any(t < 0 for t in targets):
            raise ValueError(f"Gate targets must be non-negative, got {targets}")
        return targets

    @staticmethod
    def _validate_theta(kind: str, theta) -> Optional[float]:
        """Validate rotation angle."""
        if kind in PARAMETRIC:
            if theta is None:
                raise ValueError(f"{kind} gate requires an angle")
            return float(theta)
        if theta is not None:
            raise ValueError(f"{kind} gate takes no angle")
        return None

    @staticmethod
    def _validate_matrix(kind: str, matrix, k: int) -> Optional[np.ndarray]:
        """Validate dense matrix shape and unitarity."""
        if kind != 'DENSE':
            if matrix is not None:
                raise ValueError(f"{kind} gate takes no matrix")
            return None
        if matrix is None:
            raise ValueError("Dense gate requires a matrix")
        matrix = np.array(matrix, dtype=complex)
        dim = 2 ** k
        if matrix.shape != (dim, dim):
            raise DimensionError(f"Dense gate on {k} qubit(s) needs a {dim}x{dim} matrix, got {matrix.shape}")
        if not np.allclose(matrix.conj().T @ matrix, np.eye(dim), atol=UNITARY_TOLERANCE, rtol=0):
            raise ValueError("Dense gate matrix is not unitary")
        matrix.setflags(write=False)
        return matrix

    @classmethod
    def dense(cls, matrix, targets: Iterable[int]) -> 'Gate':
        """Dense gate from a unitary matrix."""
        return cls('DENSE', targets, matrix=matrix)

    @property
    def is_clifford(self) -> bool:
        return self.kind in CLIFFORD

    def matrix(self) -> np.ndarray:
        """Unitary of the gate in little-endian target order."""
        if self.kind in _FIXED:
            return _FIXED[self.kind]
        if self.kind == 'DENSE':
            return self._matrix
        half = self.theta / 2
        c, s = np.cos(half), np.sin(half)
        if self.kind == 'RX':
            return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
        if self.kind == 'RY':
            return np.array([[c, -s], [s, c]], dtype=complex)
        if self.kind == 'RZ':
            return np.diag([np.exp(-1j * half), np.exp(1j * half)])
        # RZZ: exp(-i theta/2 Z⊗Z)
        return np.diag([np.exp(-1j * half), np.exp(1j * half), np.exp(1j * half), np.exp(-1j * half)])

    def shifted(self, offset: int) -> 'Gate':
        """Same gate with every target moved by offset."""
        targets = [t + offset for t in self.targets]
        if self.kind == 'DENSE':
            return Gate.dense(self._matrix, targets)
        return Gate(self.kind, targets, theta=self.theta)

    def to_dict(self) -> Dict:
        """
        Convert gate to dictionary.

        Dense matrices are stored row-major with [re, im] entries.
        """
        data = {'kind': self.kind, 'targets': list(self.targets)}
        if self.theta is not None:
            data['theta'] = self.theta
        if self._matrix is not None:
            data['matrix'] = [[[float(v.real), float(v.imag)] for v in row] for row in self._matrix]
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> 'Gate':
        """Create a Gate from a dictionary."""
        unknown = set(data) - {'kind', 'targets', 'theta', 'matrix'}
        if unknown:
            raise ValueError(f"Unknown gate field(s): {', '.join(sorted(unknown))}")
        if 'kind' not in data or 'targets' not in data:
            raise ValueError("Gate needs both 'kind' and 'targets'")
        matrix = data.get('matrix')
        if matrix is not None:
            matrix = parse_complex_matrix(matrix)
        return cls(data['kind'], data['targets'], theta=data.get('theta'), matrix=matrix)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gate):
            return False
        if (self.kind, self.targets, self.theta) != (other.kind, other.targets, other.theta):
            return False
        if self._matrix is None:
            return other._matrix is None
        return other._matrix is not None and np.array_equal(self._matrix, other._matrix)

    def __str__(self) -> str:
        args = ','.join(str(t) for t in self.targets)
        if self.theta is not None:
            return f"{self.kind}({self.theta:.12g})[{args}]"
        return f"{self.kind}[{args}]"


def parse_complex_matrix(rows) -> np.ndarray:
    """
    Parse a row-major matrix whose entries are real numbers or [re, im] pairs.
    """
    if not isinstance(rows, (list, tuple)) or not rows:
        raise ValueError("Matrix must be a non-empty list of rows")
    parsed = []
    for row in rows:
        if not isinstance(row, (list, tuple)):
            raise ValueError("Matrix rows must be lists")
        values = []
        for entry in row:
            if isinstance(entry, (list, tuple)):
                if len(entry) != 2:
                    raise ValueError("Complex matrix entries must be [re, im] pairs")
                values.append(complex(float(entry[0]), float(entry[1])))
            elif isinstance(entry, (int, float)) and not isinstance(entry, bool):
                values.append(complex(entry))
            else:
                raise ValueError(f"Invalid matrix entry: {entry!r}")
        parsed.append(values)
    if len({len(r) for r in parsed}) != 1:
        raise ValueError("Matrix rows have different lengths")
    return np.array(parsed, dtype=complex)
