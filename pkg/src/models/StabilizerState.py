"""
Stabilizer tableau backend.

Rows 0..n-1 are destabilizers, rows n..2n-1 stabilizers. A row is a
Hermitian Pauli (x=z=1 is Y) with a sign bit r: (-1)^r P. Global phase
is not tracked.
"""
from typing import List, Tuple
import numpy as np

from src.errors import UnsupportedGateError
from src.models.PauliString import PauliString
from src.models.QuantumState import Backend


def _pauli_bits(pauli: PauliString) -> Tuple[np.ndarray, np.ndarray]:
    n = pauli.n
    x = np.array([(pauli.x_mask >> j) & 1 for j in range(n)], dtype=bool)
    z = np.array([(pauli.z_mask >> j) & 1 for j in range(n)], dtype=bool)
    return x, z


def _row_product(x1, z1, r1, x2, z2, r2):
    """
    Signed product row1 · row2 (rows may be broadcast stacks).

    Returns:
        (x, z, r) of the product; r is the new sign bit
    """
    x1i, z1i = x1.astype(np.int8), z1.astype(np.int8)
    x2i, z2i = x2.astype(np.int8), z2.astype(np.int8)
    # exponent of i picked up per qubit
    g = np.where(
        x1 & z1, z2i - x2i,
        np.where(x1, z2i * (2 * x2i - 1), np.where(z1, x2i * (1 - 2 * z2i), 0))
    )
    total = 2 * np.asarray(r1, dtype=np.int64) + 2 * np.asarray(r2, dtype=np.int64) + g.sum(axis=-1)
    return x1 ^ x2, z1 ^ z2, (total % 4) == 2


class StabilizerState:
    backend = Backend.STABILIZER

    def __init__(self, n: int):
        """
        Initialize a StabilizerState in |0^n>.

        Args:
            n: Qubit count
        """
        self.n = n
        self.x = np.zeros((2 * n, n), dtype=bool)
        self.z = np.zeros((2 * n, n), dtype=bool)
        self.r = np.zeros(2 * n, dtype=bool)
        idx = np.arange(n)
        self.x[idx, idx] = True
        self.z[n + idx, idx] = True

    def copy(self) -> 'StabilizerState':
        clone = StabilizerState.__new__(StabilizerState)
        clone.n = self.n
        clone.x = self.x.copy()
        clone.z = self.z.copy()
        clone.r = self.r.copy()
        return clone

    def apply_gate(self, gate):
        kind, t = gate.kind, gate.targets
        x, z, r = self.x, self.z, self.r
        if kind == 'H':
            a = t[0]
            r ^= x[:, a] & z[:, a]
            x[:, a], z[:, a] = z[:, a].copy(), x[:, a].copy()
        elif kind == 'S':
            a = t[0]
            r ^= x[:, a] & z[:, a]
            z[:, a] ^= x[:, a]
        elif kind == 'CX':
            a, b = t
            r ^= x[:, a] & z[:, b] & ~(x[:, b] ^ z[:, a])
            x[:, b] ^= x[:, a]
            z[:, a] ^= z[:, b]
        elif kind == 'X':
            r ^= z[:, t[0]]
        elif kind == 'Z':
            r ^= x[:, t[0]]
        elif kind == 'Y':
            r ^= x[:, t[0]] ^ z[:, t[0]]
        else:
            raise UnsupportedGateError(f"Stabilizer backend cannot apply non-Clifford gate {gate}")

    def _anticommuting_rows(self, px: np.ndarray, pz: np.ndarray) -> np.ndarray:
        return (np.count_nonzero((self.x & pz) ^ (self.z & px), axis=1) % 2).astype(bool)

    def apply_pauli(self, pauli: PauliString):
        px, pz = _pauli_bits(pauli)
        self.r ^= self._anticommuting_rows(px, pz)

    def _deterministic_sign(self, px: np.ndarray, pz: np.ndarray, anti: np.ndarray) -> int:
        """Eigenvalue of a Pauli commuting with every stabilizer."""
        n = self.n
        sx = np.zeros(n, dtype=bool)
        sz = np.zeros(n, dtype=bool)
        sr = False
        for i in np.flatnonzero(anti[:n]):
            sx, sz, sr = _row_product(self.x[n + i], self.z[n + i], self.r[n + i], sx, sz, sr)
        return -1 if sr else 1

    def expectation_pauli(self, pauli: PauliString) -> float:
        if pauli.is_identity:
            return 1.0
        px, pz = _pauli_bits(pauli)
        anti = self._anticommuting_rows(px, pz)
        if anti[self.n:].any():
            return 0.0
        return float(self._deterministic_sign(px, pz, anti))

    def measure_pauli(self, pauli: PauliString, rng: np.random.Generator) -> int:
        """
        Measure a Pauli observable, collapsing the tableau.

        Returns:
            Eigenvalue +1 or -1
        """
        n = self.n
        px, pz = _pauli_bits(pauli)
        anti = self._anticommuting_rows(px, pz)
        stab_hits = np.flatnonzero(anti[n:])
        if len(stab_hits) == 0:
            return self._deterministic_sign(px, pz, anti)

        p = n + int(stab_hits[0])
        others = np.flatnonzero(anti)
        others = others[others != p]
        if len(others):
            nx, nz, nr = _row_product(
                self.x[p], self.z[p], self.r[p],
                self.x[others], self.z[others], self.r[others]
            )
            self.x[others], self.z[others], self.r[others] = nx, nz, nr
        self.x[p - n], self.z[p - n], self.r[p - n] = self.x[p].copy(), self.z[p].copy(), self.r[p]
        outcome = int(rng.integers(2))
        self.x[p], self.z[p], self.r[p] = px, pz, bool(outcome)
        return -1 if outcome else 1

    def sample_pauli(self, pauli: PauliString, rng: np.random.Generator) -> int:
        return self.measure_pauli(pauli, rng)

    def sample_bitstring(self, rng: np.random.Generator) -> Tuple[int, ...]:
        bits = []
        for q in range(self.n):
            value = self.measure_pauli(PauliString.single(self.n, q, 'Z'), rng)
            bits.append(0 if value == 1 else 1)
        return tuple(bits)

    def stabilizers(self) -> List[Tuple[int, PauliString]]:
        """Signed stabilizer generators."""
        generators = []
        for row in range(self.n, 2 * self.n):
            x_mask = sum(1 << int(j) for j in np.flatnonzero(self.x[row]))
            z_mask = sum(1 << int(j) for j in np.flatnonzero(self.z[row]))
            generators.append((-1 if self.r[row] else 1, PauliString.from_masks(self.n, x_mask, z_mask)))
        return generators

    def __str__(self) -> str:
        return f"StabilizerState(n={self.n})"
