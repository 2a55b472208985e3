from typing import Dict, List, Sequence, Tuple

from src.models.Unitary import Unitary


class ShotPlan:
    def __init__(self, draws: Sequence[Tuple[Unitary, int]]):
        """
        Initialize a ShotPlan instance.

        Args:
            draws: (operator, shot count) pairs in first-drawn order
        """
        self.draws: List[Tuple[Unitary, int]] = self._validate_draws(draws)
        self.total = sum(count for _, count in self.draws)

    @staticmethod
    def _validate_draws(draws) -> List[Tuple[Unitary, int]]:
        """Validate counts are positive."""
        draws = [(u, int(c)) for u, c in draws]
        if not draws:
            raise ValueError("Shot plan needs at least one draw")
        for u, count in draws:
            if count < 1:
                raise ValueError(f"Shot count for {u.label()} must be positive, got {count}")
        return draws

    def counts(self) -> List[int]:
        return [count for _, count in self.draws]

    def to_dict(self) -> Dict:
        """Convert shot plan to dictionary."""
        return {
            'total': self.total,
            'draws': [{'operator': u.label(), 'shots': c} for u, c in self.draws]
        }

    def __len__(self) -> int:
        return len(self.draws)

    def __str__(self) -> str:
        return f"ShotPlan(total={self.total}, distinct={len(self.draws)})"
