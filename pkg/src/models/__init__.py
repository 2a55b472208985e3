from .PauliString import PauliString, PhasedPauli
from .Gate import Gate
from .CircuitSeq import CircuitSeq
from .Observable import Observable
from .QuantumState import Backend, DenseState, FactoredState
from .StabilizerState import StabilizerState
from .Unitary import Unitary
from .RandomUnitaryChannel import ComposedChannel, DepolarizingChannel, ExplicitChannel, RandomUnitaryChannel
from .ShotPlan import ShotPlan
from .EstimateReport import EstimateReport
from .DensityMatrix import DensityMatrix
from .TfimParams import TfimParams
from .PopulationSeries import PopulationSeries
from .DilatedCircuit import DilatedCircuit
from .ResourceEstimate import ResourceEstimate
from .ExperimentConfig import ExperimentConfig
from .RunReport import RunReport

__all__ = [
    'PauliString', 'PhasedPauli', 'Gate', 'CircuitSeq', 'Observable',
    'Backend', 'DenseState', 'FactoredState', 'StabilizerState', 'Unitary',
    'RandomUnitaryChannel', 'ExplicitChannel', 'DepolarizingChannel', 'ComposedChannel',
    'ShotPlan', 'EstimateReport', 'DensityMatrix', 'TfimParams', 'PopulationSeries',
    'DilatedCircuit', 'ResourceEstimate', 'ExperimentConfig', 'RunReport',
]
