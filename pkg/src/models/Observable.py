"""
Observable model: a real linear combination of Pauli strings.
"""
from typing import Dict, Iterable, List, Tuple, Union
import numpy as np

from src.errors import DimensionError
from src.models.PauliString import PauliString


class Observable:
    def __init__(self, terms: Iterable[Tuple[float, PauliString]]):
        """
        Initialize an Observable instance.

        Args:
            terms: (real coefficient, PauliString) pairs on a common qubit count
        """
        self.terms: List[Tuple[float, PauliString]] = self._validate_terms(terms)

    @staticmethod
    def _validate_terms(terms) -> List[Tuple[float, PauliString]]:
        """Validate coefficients are real and qubit counts agree."""
        validated = []
        for coefficient, pauli in terms:
            if isinstance(coefficient, complex):
                if coefficient.imag != 0:
                    raise ValueError("Observable coefficients must be real")
                coefficient = coefficient.real
            if not isinstance(pauli, PauliString):
                raise ValueError("Observable terms must hold PauliString objects")
            validated.append((float(coefficient), pauli))
        if not validated:
            raise ValueError("Observable needs at least one term")
        sizes = {p.n for _, p in validated}
        if len(sizes) != 1:
            raise DimensionError(f"Observable terms act on different qubit counts: {sorted(sizes)}")
        return validated

    @classmethod
    def single(cls, pauli: Union[PauliString, str], coefficient: float = 1.0) -> 'Observable':
        """Single-term observable."""
        if isinstance(pauli, str):
            pauli = PauliString.from_text(pauli)
        return cls([(coefficient, pauli)])

    @property
    def n(self) -> int:
        return self.terms[0][1].n

    @property
    def is_single_term(self) -> bool:
        return len(self.terms) == 1

    @property
    def norm_bound(self) -> float:
        """Upper bound on the largest eigenvalue magnitude."""
        return float(sum(abs(c) for c, _ in self.terms))

    def trace(self) -> float:
        """Tr[O]: only identity terms contribute, each 2^n times its coefficient."""
        return float(sum(c for c, p in self.terms if p.is_identity)) * 2 ** self.n

    def to_matrix(self) -> np.ndarray:
        """Dense Hermitian matrix."""
        return sum(c * p.to_matrix() for c, p in self.terms)

    def to_dict(self) -> Dict:
        """Convert observable to dictionary."""
        return {'terms': [{'coefficient': c, 'pauli': p.to_text()} for c, p in self.terms]}

    @classmethod
    def from_dict(cls, data: Dict) -> 'Observable':
        """Create an Observable from a dictionary."""
        return cls([(t['coefficient'], PauliString.from_text(t['pauli'])) for t in data['terms']])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Observable):
            return False
        return self.terms == other.terms

    def __str__(self) -> str:
        return ' + '.join(f"{c:g}*{p.to_text()}" for c, p in self.terms)
