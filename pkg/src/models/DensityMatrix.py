from typing import Dict
import numpy as np

from src.config import DEFAULT_ORACLE_QUBIT_CAP
from src.errors import CapacityError, DimensionError

HERMITIAN_TOLERANCE = 1e-10
TRACE_TOLERANCE = 1e-10
PSD_TOLERANCE = 1e-8


class DensityMatrix:
    def __init__(self, matrix, cap: int = DEFAULT_ORACLE_QUBIT_CAP):
        """
        Initialize a DensityMatrix instance.

        Args:
            matrix: 2^n x 2^n complex matrix
            cap: Largest qubit count accepted
        """
        self.matrix = self._validate_matrix(matrix, cap)
        self.n = int(round(np.log2(self.matrix.shape[0])))

    @staticmethod
    def _validate_matrix(matrix, cap: int) -> np.ndarray:
        """Validate shape, Hermiticity, unit trace and positivity."""
        matrix = np.array(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError(f"Density matrix must be square, got {matrix.shape}")
        dim = matrix.shape[0]
        n = int(round(np.log2(dim))) if dim > 0 else -1
        if n < 1 or 2 ** n != dim:
            raise DimensionError(f"Density matrix dimension {dim} is not 2^n with n >= 1")
        if n > cap:
            raise CapacityError(f"Density matrices hold at most {cap} qubits, got {n}")
        if not np.allclose(matrix, matrix.conj().T, atol=HERMITIAN_TOLERANCE, rtol=0):
            raise ValueError("Density matrix is not Hermitian")
        trace = np.trace(matrix).real
        if abs(trace - 1) > TRACE_TOLERANCE:
            raise ValueError(f"Density matrix trace is {trace:.12g}, expected 1")
        min_eig = np.linalg.eigvalsh((matrix + matrix.conj().T) / 2).min()
        if min_eig < -PSD_TOLERANCE:
            raise ValueError(f"Density matrix is not positive semidefinite (min eigenvalue {min_eig:.3g})")
        return matrix

    @classmethod
    def from_statevector(cls, amplitudes) -> 'DensityMatrix':
        psi = np.asarray(amplitudes, dtype=complex)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def basis_state(cls, n: int, index: int = 0) -> 'DensityMatrix':
        matrix = np.zeros((2 ** n, 2 ** n), dtype=complex)
        matrix[index, index] = 1.0
        return cls(matrix)

    @classmethod
    def maximally_mixed(cls, n: int) -> 'DensityMatrix':
        return cls(np.eye(2 ** n, dtype=complex) / 2 ** n)

    def diagonal(self) -> np.ndarray:
        """Computational-basis populations."""
        return np.clip(np.real(np.diag(self.matrix)), 0.0, 1.0)

    def expectation(self, operator: np.ndarray) -> float:
        """Tr[O rho] for a Hermitian matrix O."""
        return float(np.real(np.trace(operator @ self.matrix)))

    def to_dict(self) -> Dict:
        return {
            'n': self.n,
            'real': self.matrix.real.tolist(),
            'imag': self.matrix.imag.tolist()
        }

    def __str__(self) -> str:
        return f"DensityMatrix(n={self.n})"
