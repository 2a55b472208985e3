"""
Pauli string model.

Qubit j holds codes[j] (qubit 0 is the leftmost character of the text
form). Internally a string is a pair of bit masks: bit j of x_mask is set
for X or Y on qubit j, bit j of z_mask for Z or Y. A string with both
bits set on a qubit denotes the Hermitian Y = iXZ, so every PauliString is
i^{|x&z|} X^x Z^z.
"""
from typing import Dict, Iterable, Tuple
import numpy as np

from src.errors import DimensionError

CODES = 'IXYZ'

# code index (0=I, 1=X, 2=Y, 3=Z) -> (x bit, z bit)
_CODE_BITS = ((0, 0), (1, 0), (1, 1), (0, 1))

# power of i -> exact phase value
PHASES = (1, 1j, -1, -1j)

_MATRICES = {
    'I': np.eye(2, dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
}


class PauliString:
    __slots__ = ('_n', '_x', '_z')

    def __init__(self, codes: Iterable[str]):
        """
        Initialize a PauliString instance.

        Args:
            codes: Sequence of 'I', 'X', 'Y', 'Z', one per qubit (qubit 0 first)
        """
        codes = self._validate_codes(codes)
        x = z = 0
        for j, code in enumerate(codes):
            xb, zb = _CODE_BITS[CODES.index(code)]
            x |= xb << j
            z |= zb << j
        self._n = len(codes)
        self._x = x
        self._z = z

    @staticmethod
    def _validate_codes(codes) -> Tuple[str, ...]:
        """Validate the per-qubit codes."""
        codes = tuple(str(c).upper() for c in codes)
        if len(codes) < 1:
            raise ValueError("Pauli string must act on at least one qubit")
        for code in codes:
            if code not in CODES:
                raise ValueError(f"Invalid Pauli code {code!r}; expected one of I, X, Y, Z")
        return codes

    @classmethod
    def from_masks(cls, n: int, x_mask: int, z_mask: int) -> 'PauliString':
        """Build a string directly from its x and z bit masks."""
        if n < 1:
            raise ValueError("Pauli string must act on at least one qubit")
        limit = 1 << n
        if not (0 <= x_mask < limit and 0 <= z_mask < limit):
            raise DimensionError(f"Bit masks do not fit in {n} qubits")
        obj = cls.__new__(cls)
        obj._n = n
        obj._x = x_mask
        obj._z = z_mask
        return obj

    @classmethod
    def from_text(cls, text: str) -> 'PauliString':
        """Parse the text form, e.g. "XIZY" (leftmost character = qubit 0)."""
        if not isinstance(text, str):
            raise ValueError("Pauli text form must be a string")
        return cls(text.strip())

    @classmethod
    def identity(cls, n: int) -> 'PauliString':
        """The all-I string on n qubits."""
        return cls.from_masks(n, 0, 0)

    @classmethod
    def single(cls, n: int, qubit: int, code: str) -> 'PauliString':
        """A single non-trivial code on one qubit, identity elsewhere."""
        if not 0 <= qubit < n:
            raise DimensionError(f"Qubit {qubit} out of range for {n} qubits")
        codes = ['I'] * n
        codes[qubit] = code
        return cls(codes)

    @classmethod
    def from_index(cls, n: int, k: int) -> 'PauliString':
        """
        Decode the little-endian base-4 index: digit j of k sets qubit j
        (0=I, 1=X, 2=Y, 3=Z).
        """
        if not 0 <= k < 4 ** n:
            raise DimensionError(f"Index {k} out of range for {n} qubits")
        x = z = 0
        for j in range(n):
            xb, zb = _CODE_BITS[(k >> (2 * j)) & 3]
            x |= xb << j
            z |= zb << j
        return cls.from_masks(n, x, z)

    @property
    def n(self) -> int:
        return self._n

    @property
    def x_mask(self) -> int:
        return self._x

    @property
    def z_mask(self) -> int:
        return self._z

    @property
    def codes(self) -> Tuple[str, ...]:
        """Per-qubit codes, qubit 0 first."""
        return tuple(self.code(j) for j in range(self._n))

    def code(self, qubit: int) -> str:
        """Code on a single qubit."""
        xb = (self._x >> qubit) & 1
        zb = (self._z >> qubit) & 1
        return CODES[_CODE_BITS.index((xb, zb))]

    def index(self) -> int:
        """Inverse of from_index."""
        k = 0
        for j in range(self._n):
            xb = (self._x >> j) & 1
            zb = (self._z >> j) & 1
            k |= _CODE_BITS.index((xb, zb)) << (2 * j)
        return k

    @property
    def is_identity(self) -> bool:
        return self._x == 0 and self._z == 0

    @property
    def is_diagonal(self) -> bool:
        """True when the string only holds I and Z."""
        return self._x == 0

    @property
    def weight(self) -> int:
        """Number of non-identity positions."""
        return (self._x | self._z).bit_count()

    @property
    def support(self) -> Tuple[int, ...]:
        """Qubits with a non-identity code."""
        mask = self._x | self._z
        return tuple(j for j in range(self._n) if (mask >> j) & 1)

    def restrict(self, qubits: Iterable[int]) -> 'PauliString':
        """Sub-string on the given qubits, in the given order."""
        return PauliString([self.code(q) for q in qubits])

    def to_text(self) -> str:
        return ''.join(self.codes)

    def to_matrix(self) -> np.ndarray:
        """
        Dense 2^n x 2^n matrix; basis index sum_j b_j 2^j (qubit 0 is the
        least significant bit).
        """
        matrix = np.ones((1, 1), dtype=complex)
        for code in self.codes:
            matrix = np.kron(_MATRICES[code], matrix)
        return matrix

    def to_dict(self) -> Dict:
        """Convert Pauli string to dictionary."""
        return {'n': self._n, 'pauli': self.to_text()}

    @classmethod
    def from_dict(cls, data: Dict) -> 'PauliString':
        """Create a PauliString from a dictionary."""
        pauli = cls.from_text(data['pauli'])
        if 'n' in data and data['n'] != pauli.n:
            raise DimensionError(f"Pauli text {data['pauli']!r} does not act on {data['n']} qubits")
        return pauli

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliString):
            return False
        return (self._n, self._x, self._z) == (other._n, other._x, other._z)

    def __hash__(self) -> int:
        return hash((self._n, self._x, self._z))

    def __len__(self) -> int:
        return self._n

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"PauliString({self.to_text()!r})"


class PhasedPauli:
    """A Pauli string with an exact phase i^k, k in {0, 1, 2, 3}."""
    __slots__ = ('_k', '_pauli')

    def __init__(self, power: int, pauli: PauliString):
        self._k = int(power) % 4
        self._pauli = pauli

    @property
    def power(self) -> int:
        """Exponent k of the phase i^k."""
        return self._k

    @property
    def phase(self) -> complex:
        return PHASES[self._k]

    @property
    def pauli(self) -> PauliString:
        return self._pauli

    def to_dict(self) -> Dict:
        return {'phase': ('+1', '+i', '-1', '-i')[self._k], 'pauli': self._pauli.to_text()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhasedPauli):
            return False
        return self._k == other._k and self._pauli == other._pauli

    def __hash__(self) -> int:
        return hash((self._k, self._pauli))

    def __str__(self) -> str:
        return f"{('+', '+i', '-', '-i')[self._k]}{self._pauli.to_text()}"

    def __repr__(self) -> str:
        return f"PhasedPauli({self._k}, {self._pauli!r})"
