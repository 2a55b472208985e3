from typing import Dict


class TfimParams:
    def __init__(self, J: float = 1.0, h: float = 1.0, dt: float = 0.25, steps: int = 25, p: float = 0.05):
        """
        Initialize a TfimParams instance.

        Two-qubit H = -J Z⊗Z - h (X⊗I + I⊗X); each step applies exp(-i H dt)
        followed by 2-qubit depolarizing noise of strength p.

        Args:
            J: Exchange coupling (a.u.)
            h: Transverse field (a.u.)
            dt: Step duration (a.u.); free parameter
            steps: Number of steps
            p: Depolarizing strength per step
        """
        self.J = float(J)
        self.h = float(h)
        self.dt = self._validate_dt(dt)
        self.steps = self._validate_steps(steps)
        self.p = self._validate_p(p)

    @staticmethod
    def _validate_dt(dt: float) -> float:
        dt = float(dt)
        if dt <= 0:
            raise ValueError(f"Step duration must be positive, got {dt}")
        return dt

    @staticmethod
    def _validate_steps(steps: int) -> int:
        if not isinstance(steps, int) or isinstance(steps, bool) or steps < 0:
            raise ValueError(f"Step count must be a non-negative integer, got {steps!r}")
        return steps

    @staticmethod
    def _validate_p(p: float) -> float:
        p = float(p)
        if not 0 <= p <= 1:
            raise ValueError(f"Depolarizing strength must lie in [0, 1], got {p}")
        return p

    def times(self):
        return [k * self.dt for k in range(self.steps + 1)]

    def to_dict(self) -> Dict:
        return {'J': self.J, 'h': self.h, 'dt': self.dt, 'steps': self.steps, 'p': self.p}

    @classmethod
    def from_dict(cls, data: Dict) -> 'TfimParams':
        return cls(J=data['J'], h=data['h'], dt=data['dt'], steps=data['steps'], p=data['p'])

    def __str__(self) -> str:
        return f"TfimParams(J={self.J}, h={self.h}, dt={self.dt}, steps={self.steps}, p={self.p})"
