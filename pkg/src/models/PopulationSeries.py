from typing import Dict, Sequence
import numpy as np

POPULATION_TOLERANCE = 1e-10

# computational-basis labels, qubit 0 first
COMP_LABELS = ('00', '10', '01', '11')


class PopulationSeries:
    def __init__(self, times: Sequence[float], comp_basis, eigen_basis):
        """
        Initialize a PopulationSeries instance.

        Args:
            times: Time of each record
            comp_basis: (len(times), 4) populations, index b0 + 2 b1
            eigen_basis: (len(times), 4) populations, eigenvalues ascending
        """
        self.times = np.asarray(times, dtype=float)
        self.comp_basis = self._validate_populations(comp_basis, len(self.times))
        self.eigen_basis = self._validate_populations(eigen_basis, len(self.times))

    @staticmethod
    def _validate_populations(values, count: int) -> np.ndarray:
        """Each row sums to 1 and every entry lies in [0, 1]."""
        values = np.asarray(values, dtype=float)
        if values.shape != (count, 4):
            raise ValueError(f"Expected populations of shape ({count}, 4), got {values.shape}")
        if np.any(np.abs(values.sum(axis=1) - 1) > POPULATION_TOLERANCE):
            raise ValueError("Population vectors must sum to 1")
        if values.min() < -POPULATION_TOLERANCE or values.max() > 1 + POPULATION_TOLERANCE:
            raise ValueError("Populations must lie in [0, 1]")
        return np.clip(values, 0.0, 1.0)

    def to_dict(self) -> Dict:
        return {
            'times': self.times.tolist(),
            'comp_labels': list(COMP_LABELS),
            'comp_basis': self.comp_basis.tolist(),
            'eigen_basis': self.eigen_basis.tolist()
        }

    def __len__(self) -> int:
        return len(self.times)

    def __str__(self) -> str:
        return f"PopulationSeries(points={len(self.times)})"
