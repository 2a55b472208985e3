"""
Tests for the ExperimentConfig and report models.
"""
import json
import pytest

from src.models.EstimateReport import EstimateReport
from src.models.ExperimentConfig import ExperimentConfig
from src.models.PauliString import PauliString
from src.models.ResourceEstimate import ResourceEstimate
from src.models.RunReport import RunReport
from src.models.ShotPlan import ShotPlan
from src.models.Unitary import Unitary


def test_experiment_defaults():
    """Test per-experiment defaults."""
    hamming = ExperimentConfig('hamming')
    tfim = ExperimentConfig('tfim')
    sweep = ExperimentConfig('depolarizing')

    assert (hamming.n_max, hamming.shots, hamming.p_flip) == (27, 10000, 0.047)
    assert (tfim.n_min, tfim.n_max, tfim.p, tfim.dt, tfim.steps) == (2, 2, 0.05, 0.25, 25)
    assert (sweep.n_min, sweep.n_max, sweep.p, sweep.shots) == (1, 27, 0.5, 1000)


@pytest.mark.parametrize("experiment,p_flip", [
    ("depolarizing", 0.0),
    ("hamming", 0.047),
    ("ancilla-compare", 0.0),
])
def test_readout_flip_defaults(experiment, p_flip):
    """Test that only the Hamming histogram flips readout bits unless asked."""
    assert ExperimentConfig(experiment).p_flip == p_flip
    assert ExperimentConfig(experiment, p_flip=0.1).p_flip == 0.1


def test_none_keeps_default():
    """Test that None fields fall back to the defaults."""
    config = ExperimentConfig('depolarizing', shots=None, seed=None, n_max=3)

    assert config.shots == 1000
    assert config.seed == 0
    assert config.n_max == 3


def test_bell_pairs_keep_even_counts():
    """Test that Bell-pair sweeps run on even qubit counts only."""
    config = ExperimentConfig('depolarizing', state='bell-pairs', n_min=1, n_max=6)

    assert config.qubit_counts == [2, 4, 6]
    assert ExperimentConfig('depolarizing', n_min=2, n_max=4).qubit_counts == [2, 3, 4]


@pytest.mark.parametrize('experiment,fields,message', [
    ('teleport', {}, "Unknown experiment"),
    ('depolarizing', {'colour': 'red'}, "Unknown config field"),
    ('depolarizing', {'p': 1.5}, "p must lie in"),
    ('depolarizing', {'shots': 0}, "shots must be a positive integer"),
    ('depolarizing', {'seed': -1}, "seed must be a non-negative integer"),
    ('depolarizing', {'backend': 'gpu'}, "backend must be one of"),
    ('depolarizing', {'n_min': 4, 'n_max': 2}, "exceeds"),
    ('depolarizing', {'n_max': 32}, "at most 31"),
    ('depolarizing', {'state': 'bell-pairs', 'n_max': 1}, "n_max >= 2"),
    ('depolarizing', {'state': 'bell-pairs', 'force_stabilizer': True}, "stabilizer"),
    ('tfim', {'n_min': 3, 'n_max': 3}, "exactly 2 qubits"),
    ('tfim', {'dt': -0.1}, "dt must be positive"),
    ('ancilla-compare', {'n_max': 4}, "at most 3"),
    ('variance-check', {'observable': 'Z'}, "channel spec path"),
    ('variance-check', {'channel_path': 'c.json', 'observable': 'Z', 'runs': 1}, "at least 2 runs"),
])
def test_invalid_configs(experiment, fields, message):
    """Test that every invalid combination is rejected before a run starts."""
    with pytest.raises(ValueError, match=message):
        ExperimentConfig(experiment, **fields)


def test_config_to_dict_from_dict():
    """Test the verbatim echo and its round trip."""
    config = ExperimentConfig('variance-check', channel_path='c.json', observable='ZI', runs=50)
    data = config.to_dict()

    assert data['experiment'] == 'variance-check'
    assert data['runs'] == 50
    assert ExperimentConfig.from_dict(data) == config


def test_shot_plan():
    """Test totals and validation of a shot plan."""
    x = Unitary.from_pauli(PauliString.from_text('X'))
    plan = ShotPlan([(x, 3), (Unitary.from_pauli(PauliString.from_text('I')), 7)])

    assert plan.total == 10
    assert plan.counts() == [3, 7]
    assert plan.to_dict()['draws'][0] == {'operator': 'X', 'shots': 3}
    with pytest.raises(ValueError, match="positive"):
        ShotPlan([(x, 0)])
    with pytest.raises(ValueError, match="at least one"):
        ShotPlan([])


def test_estimate_report():
    """Test variance clipping and serialization."""
    report = EstimateReport(0.5, 100, 0.0075, -1e-15, [{'operator': 'I', 'shots': 100, 'mean': 0.5}], seed=3)

    assert report.empirical_variance == 0.0
    assert report.standard_error == pytest.approx(0.0075 ** 0.5)
    assert 'per_draw' not in report.to_dict()
    assert report.to_dict(include_draws=True)['per_draw'][0]['shots'] == 100
    with pytest.raises(ValueError, match="non-negative"):
        EstimateReport(0.5, 100, -0.1, 0.0, [], seed=0)


def test_resource_estimate_equality():
    """Test comparing resource rows."""
    row = ResourceEstimate('hybrid', 3, 1, 64, 0, 0, 'f')

    assert row == ResourceEstimate('hybrid', 3, 1, 64, 0, 0, 'f')
    with pytest.raises(ValueError):
        ResourceEstimate('teleport', 3, 1, 64, 0, 0, 'f')


def test_run_report_files(tmp_path):
    """Test JSON and CSV output and the timing-free payload."""
    report = RunReport(
        config={'experiment': 'hamming'},
        results={'points': [{'weight': 0, 'frequency': 0.6}]},
        oracle={'lambda': 0.5},
        timing={'total_s': 0.1},
        version='0.1.0',
        seed=4,
        series=[{'weight': 0, 'frequency': 0.6}, {'weight': 1, 'frequency': 0.4, 'note': 'x'}]
    )
    json_path = report.write_json(str(tmp_path / 'out' / 'report.json'))
    csv_path = report.write_csv(str(tmp_path / 'series.csv'))

    assert json.loads(json_path.read_text())['seed'] == 4
    assert 'timing' not in report.numeric_payload()
    lines = csv_path.read_text().splitlines()
    assert lines[0] == 'weight,frequency,note'
    assert lines[2] == '1,0.4,x'
