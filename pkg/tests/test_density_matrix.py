"""
Tests for the DensityMatrix, TfimParams and PopulationSeries models.
"""
import numpy as np
import pytest

from src.errors import CapacityError, DimensionError
from src.models.DensityMatrix import DensityMatrix
from src.models.PopulationSeries import PopulationSeries
from src.models.TfimParams import TfimParams


def test_density_matrix_creation():
    """Test basis, mixed and pure constructors."""
    zero = DensityMatrix.basis_state(2)
    mixed = DensityMatrix.maximally_mixed(1)
    plus = DensityMatrix.from_statevector(np.array([1, 1]) / np.sqrt(2))

    assert zero.n == 2
    np.testing.assert_allclose(zero.diagonal(), [1, 0, 0, 0])
    np.testing.assert_allclose(mixed.matrix, np.eye(2) / 2)
    assert plus.expectation(np.array([[0, 1], [1, 0]])) == pytest.approx(1.0)


@pytest.mark.parametrize('matrix,error,message', [
    (np.eye(3) / 3, DimensionError, "2\\^n"),
    (np.ones((2, 4)), DimensionError, "square"),
    (np.array([[1, 1j], [0, 0]]), ValueError, "Hermitian"),
    (np.eye(2), ValueError, "trace"),
    (np.array([[1.5, 0], [0, -0.5]]), ValueError, "positive semidefinite"),
])
def test_density_matrix_invalid(matrix, error, message):
    """Test shape, Hermiticity, trace and positivity checks."""
    with pytest.raises(error, match=message):
        DensityMatrix(matrix)


def test_density_matrix_cap():
    """Test the oracle qubit cap."""
    with pytest.raises(CapacityError):
        DensityMatrix(np.eye(8) / 8, cap=2)


def test_density_matrix_to_dict():
    """Test the real/imaginary split."""
    data = DensityMatrix.basis_state(1, 1).to_dict()

    assert data == {'n': 1, 'real': [[0.0, 0.0], [0.0, 1.0]], 'imag': [[0.0, 0.0], [0.0, 0.0]]}


def test_tfim_params_defaults():
    """Test defaults and the sample times."""
    params = TfimParams(steps=4)

    assert (params.J, params.h, params.dt, params.p) == (1.0, 1.0, 0.25, 0.05)
    assert params.times() == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert TfimParams.from_dict(params.to_dict()).to_dict() == params.to_dict()


@pytest.mark.parametrize('kwargs', [{'dt': 0}, {'steps': -1}, {'steps': 2.5}, {'p': 1.2}])
def test_tfim_params_invalid(kwargs):
    """Test rejected step durations, counts and strengths."""
    with pytest.raises(ValueError):
        TfimParams(**kwargs)


def test_population_series_validation():
    """Test the shape and normalization checks."""
    rows = [[1, 0, 0, 0], [0.25, 0.25, 0.25, 0.25]]
    series = PopulationSeries([0, 1], rows, rows)

    assert len(series) == 2
    assert series.to_dict()['comp_labels'] == ['00', '10', '01', '11']
    with pytest.raises(ValueError, match="sum to 1"):
        PopulationSeries([0], [[0.5, 0, 0, 0]], [[1, 0, 0, 0]])
    with pytest.raises(ValueError, match="shape"):
        PopulationSeries([0, 1], rows[:1], rows)
