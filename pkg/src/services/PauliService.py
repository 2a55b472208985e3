"""
Exact Pauli-string algebra.
"""
from typing import Sequence, Tuple
import numpy as np

from src.errors import CapacityError, DimensionError
from src.models.PauliString import PauliString, PhasedPauli

MAX_SAMPLED_QUBITS = 31


class PauliService:
    @staticmethod
    def multiply(a: PauliString, b: PauliString) -> PhasedPauli:
        """
        Exact product a·b with its phase.

        Args:
            a: Left factor
            b: Right factor

        Returns:
            PhasedPauli holding i^k and the product string

        Raises:
            DimensionError: If the strings act on different qubit counts
        """
        PauliService._check_same_n(a, b)
        # a = i^{|x1 z1|} X^x1 Z^z1; moving Z^z1 past X^x2 costs (-1)^{|z1 x2|}
        x = a.x_mask ^ b.x_mask
        z = a.z_mask ^ b.z_mask
        power = (
            (a.x_mask & a.z_mask).bit_count()
            + (b.x_mask & b.z_mask).bit_count()
            + 2 * (a.z_mask & b.x_mask).bit_count()
            - (x & z).bit_count()
        )
        return PhasedPauli(power % 4, PauliString.from_masks(a.n, x, z))

    @staticmethod
    def commutes(a: PauliString, b: PauliString) -> bool:
        """True when a and b commute."""
        PauliService._check_same_n(a, b)
        overlap = (a.x_mask & b.z_mask).bit_count() + (a.z_mask & b.x_mask).bit_count()
        return overlap % 2 == 0

    @staticmethod
    def conjugate_sign(observable: PauliString, noise: PauliString) -> int:
        """
        Sign s with noise·observable·noise† = s·observable.

        Returns:
            +1 if the strings commute, -1 if they anticommute
        """
        return 1 if PauliService.commutes(observable, noise) else -1

    @staticmethod
    def apply_to_basis(p: PauliString, bits: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
        """
        Apply a Pauli string to a computational basis state.

        Args:
            p: Pauli string
            bits: Basis state, bits[j] is qubit j

        Returns:
            (new bits, k) with p|bits> = i^k |new bits>

        Raises:
            DimensionError: If the bit length does not match p.n
        """
        if len(bits) != p.n:
            raise DimensionError(f"Bitstring of length {len(bits)} does not match {p.n} qubits")
        b = 0
        for j, bit in enumerate(bits):
            if bit not in (0, 1):
                raise ValueError(f"Bit {j} is {bit!r}; expected 0 or 1")
            b |= int(bit) << j
        power = (p.x_mask & p.z_mask).bit_count() + 2 * (p.z_mask & b).bit_count()
        flipped = b ^ p.x_mask
        return tuple((flipped >> j) & 1 for j in range(p.n)), power % 4

    @staticmethod
    def sample_nonidentity_uniform(n: int, rng: np.random.Generator) -> PauliString:
        """
        Draw one of the 4^n - 1 non-identity strings uniformly.

        Args:
            n: Qubit count, 1 <= n <= 31
            rng: Caller-owned generator

        Returns:
            PauliString decoded from an integer k uniform in [1, 4^n - 1]

        Raises:
            CapacityError: If n is outside [1, 31]
        """
        if not 1 <= n <= MAX_SAMPLED_QUBITS:
            raise CapacityError(
                f"Uniform Pauli sampling supports 1 to {MAX_SAMPLED_QUBITS} qubits, got {n}"
            )
        k = int(rng.integers(1, 4 ** n))
        return PauliString.from_index(n, k)

    @staticmethod
    def _check_same_n(a: PauliString, b: PauliString):
        if a.n != b.n:
            raise DimensionError(f"Pauli strings act on {a.n} and {b.n} qubits")
