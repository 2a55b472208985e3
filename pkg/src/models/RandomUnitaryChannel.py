"""
Random-unitary channel models: E(rho) = sum_i p_i U_i rho U_i^dagger.
"""
from typing import List, Sequence
import math

from src.errors import ChannelValidationError, DimensionError
from src.models.Unitary import Unitary

PROBABILITY_TOLERANCE = 1e-12


class RandomUnitaryChannel:
    """Common base of the channel variants."""
    n: int

    def depolarizing_lambda(self):
        return None


class ExplicitChannel(RandomUnitaryChannel):
    def __init__(self, probs: Sequence[float], unitaries: Sequence[Unitary]):
        """
        Initialize an ExplicitChannel instance.

        Args:
            probs: Non-negative weights summing to 1 within 1e-12
            unitaries: One operator per weight, all on the same qubit count
        """
        self.probs = self._validate_probs(probs)
        self.unitaries = self._validate_unitaries(unitaries, len(self.probs))
        self.n = self.unitaries[0].n

    @staticmethod
    def _validate_probs(probs) -> List[float]:
        """Validate the probability vector."""
        probs = [float(p) for p in probs]
        if not probs:
            raise ChannelValidationError("Channel needs at least one term")
        for i, p in enumerate(probs):
            if p < 0 or math.isnan(p):
                raise ChannelValidationError(f"negative probability {p:g} at term {i}")
        total = math.fsum(probs)
        if abs(total - 1) > PROBABILITY_TOLERANCE:
            raise ChannelValidationError(f"probabilities sum to {total:.12g}")
        return probs

    @staticmethod
    def _validate_unitaries(unitaries, count: int) -> List[Unitary]:
        """Validate operator count and sizes."""
        unitaries = list(unitaries)
        if len(unitaries) != count:
            raise ChannelValidationError(f"{count} probabilities but {len(unitaries)} unitaries")
        sizes = {u.n for u in unitaries}
        if len(sizes) != 1:
            raise DimensionError(f"Channel operators act on different qubit counts: {sorted(sizes)}")
        return unitaries

    def __len__(self) -> int:
        return len(self.probs)

    def __str__(self) -> str:
        return f"ExplicitChannel(n={self.n}, terms={len(self.probs)})"


class DepolarizingChannel(RandomUnitaryChannel):
    def __init__(self, n: int, p: float):
        """
        Initialize a DepolarizingChannel instance.

        Identity carries weight 1-p; each of the 4^n - 1 other strings p/(4^n - 1).

        Args:
            n: Qubit count
            p: Strength in [0, 1]
        """
        self.n = self._validate_n(n)
        self.p = self._validate_p(p)

    @staticmethod
    def _validate_n(n: int) -> int:
        if not isinstance(n, int) or not 1 <= n <= 31:
            raise ValueError(f"Depolarizing channel supports 1 to 31 qubits, got {n!r}")
        return n

    @staticmethod
    def _validate_p(p: float) -> float:
        p = float(p)
        if not 0 <= p <= 1:
            raise ValueError(f"Depolarizing strength must lie in [0, 1], got {p}")
        return p

    def depolarizing_lambda(self) -> float:
        """Weight of I/2^n in the equivalent (1-lambda) rho + lambda I/2^n form."""
        d2 = 4 ** self.n
        return d2 / (d2 - 1) * self.p

    def __str__(self) -> str:
        return f"DepolarizingChannel(n={self.n}, p={self.p})"


class ComposedChannel(RandomUnitaryChannel):
    def __init__(self, steps: Sequence[RandomUnitaryChannel]):
        """
        Initialize a ComposedChannel instance.

        Args:
            steps: Channels in application order (steps[0] acts first)
        """
        self.steps = self._validate_steps(steps)
        self.n = self.steps[0].n

    @staticmethod
    def _validate_steps(steps) -> List[RandomUnitaryChannel]:
        """Flatten nested compositions and check sizes agree."""
        flat: List[RandomUnitaryChannel] = []
        for step in steps:
            if isinstance(step, ComposedChannel):
                flat.extend(step.steps)
            elif isinstance(step, RandomUnitaryChannel):
                flat.append(step)
            else:
                raise ValueError("Composed channel steps must be channels")
        if not flat:
            raise ChannelValidationError("Composed channel needs at least one step")
        sizes = {s.n for s in flat}
        if len(sizes) != 1:
            raise DimensionError(f"Composed steps act on different qubit counts: {sorted(sizes)}")
        return flat

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return f"ComposedChannel(n={self.n}, steps={len(self.steps)})"
