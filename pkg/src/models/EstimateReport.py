from typing import Dict, List, Optional


class EstimateReport:
    def __init__(
        self,
        mean: float,
        n_shots: int,
        predicted_variance: float,
        empirical_variance: float,
        per_draw: List[Dict],
        seed: int,
        mode: str = 'shot',
        backend: Optional[str] = None,
        variance_source: str = 'oracle'
    ):
        """
        Initialize an EstimateReport instance.

        Args:
            mean: The estimate E-hat
            n_shots: Total shots N
            predicted_variance: (sum_i p_i <O^2>_i - <O>^2) / N
            empirical_variance: Sample variance of per-shot outcomes / N
            per_draw: Diagnostics per distinct operator (operator, shots, mean)
            seed: Master seed
            mode: 'shot' or 'exact-subcircuit'
            backend: Backend the shots ran on
            variance_source: 'oracle' or 'plug-in' (predicted from the estimate itself)
        """
        self.mean = float(mean)
        self.n_shots = int(n_shots)
        self.predicted_variance = self._validate_variance(predicted_variance)
        self.empirical_variance = self._validate_variance(empirical_variance)
        self.per_draw = per_draw
        self.seed = seed
        self.mode = mode
        self.backend = backend
        self.variance_source = variance_source

    @staticmethod
    def _validate_variance(value: float) -> float:
        """Clip round-off below zero; reject real negatives."""
        value = float(value)
        if value < -1e-12:
            raise ValueError(f"Variance must be non-negative, got {value}")
        return max(value, 0.0)

    @property
    def standard_error(self) -> float:
        return self.predicted_variance ** 0.5

    def to_dict(self, include_draws: bool = False) -> Dict:
        """Convert report to dictionary."""
        data = {
            'mean': self.mean,
            'n_shots': self.n_shots,
            'predicted_variance': self.predicted_variance,
            'empirical_variance': self.empirical_variance,
            'variance_source': self.variance_source,
            'distinct_operators': len(self.per_draw),
            'mode': self.mode,
            'backend': self.backend,
            'seed': self.seed
        }
        if include_draws:
            data['per_draw'] = self.per_draw
        return data

    def __str__(self) -> str:
        return f"EstimateReport(mean={self.mean:.6g}, N={self.n_shots}, var={self.predicted_variance:.3g})"
