from typing import Dict, Optional

EXPERIMENTS = ('depolarizing', 'hamming', 'tfim', 'ancilla-compare', 'variance-check')
BACKENDS = ('auto', 'dense', 'factored', 'stabilizer')
STATES = ('zero', 'bell-pairs')
MODES = ('shot', 'exact-subcircuit')
MAX_SWEEP_QUBITS = 31
MAX_ANCILLA_COMPARE_QUBITS = 3

# per-experiment defaults; unspecified fields fall back to the common ones
_COMMON = {
    'n_min': 1, 'n_max': 27, 'p': 0.5, 'shots': 1000, 'seed': 0, 'backend': 'auto',
    'state': 'zero', 'p_flip': 0.0, 'J': 1.0, 'h': 1.0, 'dt': 0.25, 'steps': 25,
    'channel_path': None, 'observable': None, 'runs': 400, 'mode': 'shot',
    'force_stabilizer': False,
}
DEFAULTS = {
    'depolarizing': {},
    'hamming': {'n_min': 27, 'n_max': 27, 'shots': 10000, 'p_flip': 0.047},
    'tfim': {'n_min': 2, 'n_max': 2, 'p': 0.05},
    'ancilla-compare': {'n_min': 1, 'n_max': 3},
    'variance-check': {'n_min': 1, 'n_max': 1},
}


class ExperimentConfig:
    def __init__(self, experiment: str, **fields):
        """
        Initialize an ExperimentConfig instance.

        Every parameter is validated here, before any run starts.

        Args:
            experiment: One of EXPERIMENTS
            **fields: Overrides of the experiment's defaults; None keeps the default
        """
        self.experiment = self._validate_experiment(experiment)
        values = dict(_COMMON)
        values.update(DEFAULTS[self.experiment])
        unknown = set(fields) - set(_COMMON)
        if unknown:
            raise ValueError(f"Unknown config field(s): {', '.join(sorted(unknown))}")
        values.update({k: v for k, v in fields.items() if v is not None})

        self.n_min = self._validate_count(values['n_min'], 'n_min')
        self.n_max = self._validate_count(values['n_max'], 'n_max')
        self.p = self._validate_probability(values['p'], 'p')
        self.shots = self._validate_count(values['shots'], 'shots')
        self.seed = self._validate_seed(values['seed'])
        self.backend = self._validate_choice(values['backend'], BACKENDS, 'backend')
        self.state = self._validate_choice(values['state'], STATES, 'state')
        self.p_flip = self._validate_probability(values['p_flip'], 'p_flip')
        self.J = float(values['J'])
        self.h = float(values['h'])
        self.dt = self._validate_dt(values['dt'])
        self.steps = self._validate_steps(values['steps'])
        self.channel_path: Optional[str] = values['channel_path']
        self.observable: Optional[str] = values['observable']
        self.runs = self._validate_count(values['runs'], 'runs')
        self.mode = self._validate_choice(values['mode'], MODES, 'mode')
        self.force_stabilizer = bool(values['force_stabilizer'])
        self._validate_combination()

    @staticmethod
    def _validate_experiment(experiment: str) -> str:
        if experiment not in EXPERIMENTS:
            raise ValueError(f"Unknown experiment: {experiment!r}; expected one of {', '.join(EXPERIMENTS)}")
        return experiment

    @staticmethod
    def _validate_count(value, name: str) -> int:
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ValueError(f"{name} must be a positive integer, got {value!r}")
        return value

    @staticmethod
    def _validate_probability(value, name: str) -> float:
        value = float(value)
        if not 0 <= value <= 1:
            raise ValueError(f"{name} must lie in [0, 1], got {value}")
        return value

    @staticmethod
    def _validate_seed(seed) -> int:
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
        return seed

    @staticmethod
    def _validate_choice(value: str, choices, name: str) -> str:
        if value not in choices:
            raise ValueError(f"{name} must be one of {', '.join(choices)}, got {value!r}")
        return value

    @staticmethod
    def _validate_dt(dt) -> float:
        dt = float(dt)
        if dt <= 0:
            raise ValueError(f"dt must be positive, got {dt}")
        return dt

    @staticmethod
    def _validate_steps(steps) -> int:
        if not isinstance(steps, int) or isinstance(steps, bool) or steps < 0:
            raise ValueError(f"steps must be a non-negative integer, got {steps!r}")
        return steps

    def _validate_combination(self):
        """Cross-field rules per experiment."""
        if self.n_min > self.n_max:
            raise ValueError(f"n_min ({self.n_min}) exceeds n_max ({self.n_max})")
        if self.experiment == 'depolarizing':
            if self.n_max > MAX_SWEEP_QUBITS:
                raise ValueError(f"Depolarizing sweep supports at most {MAX_SWEEP_QUBITS} qubits")
            if self.state == 'bell-pairs' and self.n_max < 2:
                raise ValueError("Bell-pair sweep needs n_max >= 2")
            if self.state == 'bell-pairs' and self.force_stabilizer:
                raise ValueError("Bell-phase pairs cannot run on the stabilizer backend")
        if self.experiment == 'hamming' and self.n_max > MAX_SWEEP_QUBITS:
            raise ValueError(f"Hamming experiment supports at most {MAX_SWEEP_QUBITS} qubits")
        if self.experiment == 'tfim' and (self.n_min, self.n_max) != (2, 2):
            raise ValueError("TFIM experiment acts on exactly 2 qubits")
        if self.experiment == 'ancilla-compare' and self.n_max > MAX_ANCILLA_COMPARE_QUBITS:
            raise ValueError(f"Ancilla comparison supports at most {MAX_ANCILLA_COMPARE_QUBITS} qubits")
        if self.experiment == 'variance-check':
            if not self.channel_path or not self.observable:
                raise ValueError("variance-check needs a channel spec path and an observable")
            if self.runs < 2:
                raise ValueError("variance-check needs at least 2 runs")

    @property
    def qubit_counts(self):
        """Qubit counts the experiment sweeps; Bell-pair sweeps keep even counts only."""
        counts = range(self.n_min, self.n_max + 1)
        if self.experiment == 'depolarizing' and self.state == 'bell-pairs':
            return [n for n in counts if n % 2 == 0]
        return list(counts)

    def to_dict(self) -> Dict:
        """Verbatim echo of every parameter."""
        return {
            'experiment': self.experiment,
            'n_min': self.n_min,
            'n_max': self.n_max,
            'p': self.p,
            'shots': self.shots,
            'seed': self.seed,
            'backend': self.backend,
            'state': self.state,
            'p_flip': self.p_flip,
            'J': self.J,
            'h': self.h,
            'dt': self.dt,
            'steps': self.steps,
            'channel_path': self.channel_path,
            'observable': self.observable,
            'runs': self.runs,
            'mode': self.mode,
            'force_stabilizer': self.force_stabilizer
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'ExperimentConfig':
        data = dict(data)
        return cls(data.pop('experiment'), **data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExperimentConfig):
            return False
        return self.to_dict() == other.to_dict()

    def __str__(self) -> str:
        return f"ExperimentConfig({self.experiment}, n={self.n_min}..{self.n_max}, N={self.shots}, seed={self.seed})"
