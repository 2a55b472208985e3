"""
ExperimentFacade runs the desk-scale experiments end to end: depolarizing
sweeps, Hamming-weight histograms, the noisy two-qubit TFIM, the ancilla
baseline comparison and the variance check.
"""
from typing import Dict, List, Optional
import logging
import time
import numpy as np

from src import __version__
from src.config import SimConfig, load_sim_config
from src.errors import CapacityError, FitError
from src.models.DensityMatrix import DensityMatrix
from src.models.ExperimentConfig import ExperimentConfig
from src.models.PauliString import PauliString
from src.models.PopulationSeries import COMP_LABELS
from src.models.QuantumState import Backend
from src.models.RandomUnitaryChannel import ExplicitChannel
from src.models.RunReport import RunReport
from src.models.TfimParams import TfimParams
from src.models.Unitary import Unitary
from src.seed import derive_seed, substream
from src.pool import run_tasks
from src.services.AncillaService import AncillaService
from src.services.ChannelService import ChannelService
from src.services.EngineService import PREP_BELL_PAIRS, PREP_ZERO, EngineService
from src.services.EstimatorService import EstimatorService
from src.services.OracleService import OracleService
from src.services.PauliService import PauliService

log = logging.getLogger(__name__)

SIGMA_BOUND = 4.0
MSE_SIGMA = 3.0
# trajectories per TFIM task; fixed so results do not depend on the worker count
TFIM_CHUNK = 250


class ExperimentFacade:
    def __init__(self, sim_config: Optional[SimConfig] = None):
        """Initialize the ExperimentFacade with required services."""
        self.sim_config = sim_config or load_sim_config()
        self.channel_service = ChannelService()
        self.engine_service = EngineService()
        self.estimator_service = EstimatorService()
        self.oracle_service = OracleService()
        self.ancilla_service = AncillaService()

    def run(self, config: ExperimentConfig) -> RunReport:
        """
        Run the experiment a config names.

        Raises:
            ValueError: Invalid combination discovered at run time
            CapacityError: A state or enumeration exceeds its cap
        """
        runners = {
            'depolarizing': self.run_depolarizing_sweep,
            'hamming': self.run_hamming,
            'tfim': self.run_tfim,
            'ancilla-compare': self.run_ancilla_compare,
            'variance-check': self.run_variance_check,
        }
        log.info("Running %s", config)
        return runners[config.experiment](config)

    def _report(self, config: ExperimentConfig, results: Dict, oracle: Dict, started: float,
                series: List[Dict]) -> RunReport:
        return RunReport(
            config=config.to_dict(),
            results=results,
            oracle=oracle,
            timing={'total_s': time.perf_counter() - started},
            version=__version__,
            seed=config.seed,
            series=series
        )

    @staticmethod
    def inject_readout_flips(bits, p_flip: float, rng: np.random.Generator) -> np.ndarray:
        """
        Flip each measured bit independently with probability p_flip.

        Args:
            bits: Array of 0/1 values, any shape
            p_flip: Per-bit flip probability
            rng: Caller-owned generator

        Returns:
            New uint8 array of the same shape
        """
        if not 0 <= p_flip <= 1:
            raise ValueError(f"Bit-flip rate must lie in [0, 1], got {p_flip}")
        bits = np.asarray(bits, dtype=np.uint8)
        if p_flip == 0:
            return bits.copy()
        return bits ^ (rng.random(bits.shape) < p_flip).astype(np.uint8)

    def _sweep_observables(self, n: int, state: str) -> List[PauliString]:
        if state == PREP_BELL_PAIRS:
            return [
                PauliString.from_masks(n, (1 << i) | (1 << (i + 1)), 0)
                for i in range(0, n, 2)
            ]
        return [PauliString.single(n, i, 'Z') for i in range(n)]

    def run_depolarizing_sweep(self, config: ExperimentConfig) -> RunReport:
        """
        Estimate every single-qubit Z (zero state) or pairwise XX (Bell-phase
        pairs) under depolarizing noise for each n, against the analytic values.
        """
        started = time.perf_counter()
        backend = Backend.STABILIZER.value if config.force_stabilizer else config.backend
        points, series, lambdas = [], [], []
        for n in config.qubit_counts:
            channel = self.channel_service.depolarizing(n, config.p)
            lam = channel.depolarizing_lambda()
            lambdas.append({'n': n, 'lambda': lam})
            estimates, analytic, readout, predicted, empirical = [], [], [], [], []
            route = None
            observables = self._sweep_observables(n, config.state)
            for pauli in observables:
                report = self.estimator_service.estimate(
                    channel, config.state, pauli, config.shots,
                    backend=backend, seed=config.seed, mode=config.mode,
                    tag=f"depolarizing/{config.state}/{n}/{pauli.to_text()}",
                    dense_cap=self.sim_config.dense_qubit_cap,
                    enumeration_cap=self.sim_config.enumeration_cap,
                    p_flip=config.p_flip
                )
                base = self.oracle_service.prep_expectation(config.state, n, pauli, self.sim_config.dense_qubit_cap)
                value = self.oracle_service.depolarized_expectation(pauli, n, config.p, trace_o_rho=base)
                route = report.backend
                estimates.append(report.mean)
                analytic.append(value)
                readout.append(value * (1 - 2 * config.p_flip) ** pauli.weight)
                predicted.append(report.predicted_variance)
                empirical.append(report.empirical_variance)
                series.append({
                    'n': n, 'observable': pauli.to_text(), 'estimate': report.mean,
                    'analytic': value, 'predicted_variance': report.predicted_variance,
                    'empirical_variance': report.empirical_variance
                })
            mse = self.estimator_service.mse(estimates, analytic)
            bound = MSE_SIGMA ** 2 * float(np.mean([1 - a ** 2 for a in readout])) / config.shots
            point = {
                'n': n,
                'observables': [p.to_text() for p in observables],
                'estimates': estimates,
                'analytic': analytic,
                'predicted_variance': predicted,
                'empirical_variance': empirical,
                'mse': mse,
                'mse_bound': bound,
                'backend': route
            }
            if config.p_flip > 0:
                point['analytic_readout'] = readout
                point['mse_readout'] = self.estimator_service.mse(estimates, readout)
            points.append(point)
            log.info("n=%d: MSE %.3g (bound %.3g) on %s", n, mse, bound, route)

        within = sum(1 for pt in points if pt.get('mse_readout', pt['mse']) <= pt['mse_bound'])
        results = {'points': points, 'fraction_within_bound': within / len(points)}
        oracle = {
            'formula': '(1 - lambda) Tr[O rho] + lambda Tr[O] / 2^n',
            'lambda': lambdas
        }
        return self._report(config, results, oracle, started, series)

    def run_hamming(self, config: ExperimentConfig) -> RunReport:
        """
        Sample bitstrings of the depolarized |0^n>, apply readout flips, and
        compare the Hamming-weight histogram to the mixture law.
        """
        started = time.perf_counter()
        n = config.n_max
        channel = self.channel_service.depolarizing(n, config.p)
        plan = self.estimator_service.allocate_shots(channel, config.shots, substream(config.seed, 'hamming', 0))
        use_tableau = config.force_stabilizer or config.backend == Backend.STABILIZER.value
        zeros = [0] * n

        def sample_group(item):
            i, (u, count) = item
            if not use_tableau:
                bits, _ = PauliService.apply_to_basis(u.pauli, zeros)
                return np.tile(np.asarray(bits, dtype=np.uint8), (count, 1))
            rng = substream(config.seed, 'hamming', 1, i)
            rows = []
            for _ in range(count):
                state = self.engine_service.prepare_zero(
                    n, Backend.STABILIZER, stabilizer_cap=self.sim_config.stabilizer_qubit_cap
                )
                self.engine_service.apply_pauli(state, u.pauli)
                rows.append(self.engine_service.sample_bitstring(state, rng))
            return np.asarray(rows, dtype=np.uint8)

        bits = np.vstack(run_tasks(sample_group, enumerate(plan.draws)))
        bits = self.inject_readout_flips(bits, config.p_flip, substream(config.seed, 'hamming', 2))
        weights = bits.sum(axis=1)
        histogram = np.bincount(weights, minlength=n + 1) / config.shots

        ideal = self.oracle_service.hamming_distribution(n, config.p, 0.0)
        flipped = self.oracle_service.hamming_distribution(n, config.p, config.p_flip)
        tv = self.oracle_service.total_variation(histogram, flipped)
        log.info("Hamming n=%d: TV %.4f against the readout-flip mixture", n, tv)

        series = [
            {'weight': w, 'frequency': float(histogram[w]),
             'oracle_ideal': float(ideal[w]), 'oracle_readout': float(flipped[w])}
            for w in range(n + 1)
        ]
        results = {
            'points': series,
            'n': n,
            'distinct_operators': len(plan),
            'tv_readout': tv,
            'tv_ideal': self.oracle_service.total_variation(histogram, ideal)
        }
        oracle = {
            'lambda': channel.depolarizing_lambda(),
            'ideal': ideal.tolist(),
            'readout': flipped.tolist()
        }
        return self._report(config, results, oracle, started, series)

    def run_tfim(self, config: ExperimentConfig) -> RunReport:
        """
        Trajectory sampling of the noisy two-qubit TFIM in both bases next to
        the exact evolution, with decay-time fits of the eigenpopulations.

        Each step draws one operator from depolarizing(2, p) composed after
        the dense propagator. A trajectory is read out at every step without
        collapse, once in the computational basis and once after rotating
        into the eigenbasis, so every time point sees all shots.
        """
        started = time.perf_counter()
        params = TfimParams(J=config.J, h=config.h, dt=config.dt, steps=config.steps, p=config.p)
        log.warning("TFIM starts from |00> with dt=%g per step (dt is a free parameter)", params.dt)

        exact = self.oracle_service.tfim_exact_evolve(params)
        energies, vectors = self.oracle_service.tfim_eigenbasis(params.J, params.h)
        propagator = Unitary.from_matrix(self.oracle_service.tfim_propagator(params.J, params.h, params.dt))
        step = self.channel_service.compose(
            self.channel_service.depolarizing(2, params.p),
            ExplicitChannel([1.0], [propagator])
        )
        to_eigen = Unitary.from_matrix(vectors.conj().T)
        shots = config.shots
        chunks = [
            (c, min(TFIM_CHUNK, shots - c * TFIM_CHUNK))
            for c in range(-(-shots // TFIM_CHUNK))
        ]

        def run_trajectories(chunk):
            c, count = chunk
            rng = substream(config.seed, 'tfim', c)
            counts = np.zeros((2, params.steps + 1, 4), dtype=np.int64)
            for _ in range(count):
                state = self.engine_service.prepare_zero(2, Backend.DENSE)
                for k in range(params.steps + 1):
                    if k:
                        self.engine_service.apply_unitary(state, self.channel_service.sample_operator(step, rng))
                    rotated = self.engine_service.apply_unitary(state.copy(), to_eigen)
                    for pass_index, readout in enumerate((state, rotated)):
                        b0, b1 = self.engine_service.sample_bitstring(readout, rng)
                        counts[pass_index, k, b0 + 2 * b1] += 1
            return counts

        totals = sum(run_tasks(run_trajectories, chunks))
        comp, eigen = totals / shots

        within, total = 0, 0
        for sampled, reference in ((comp, exact.comp_basis), (eigen, exact.eigen_basis)):
            bars = SIGMA_BOUND * np.sqrt(reference * (1 - reference) / shots) + 1e-12
            within += int((np.abs(sampled - reference) <= bars).sum())
            total += sampled.size

        points, series = [], []
        for k, t in enumerate(exact.times):
            points.append({
                'k': k, 't': float(t),
                'comp_sampled': comp[k].tolist(), 'comp_exact': exact.comp_basis[k].tolist(),
                'eigen_sampled': eigen[k].tolist(), 'eigen_exact': exact.eigen_basis[k].tolist()
            })
            row = {'k': k, 't': float(t)}
            for j, label in enumerate(COMP_LABELS):
                row[f'p{label}_sampled'] = float(comp[k, j])
                row[f'p{label}_exact'] = float(exact.comp_basis[k, j])
            for j in range(4):
                row[f'e{j}_sampled'] = float(eigen[k, j])
                row[f'e{j}_exact'] = float(exact.eigen_basis[k, j])
            series.append(row)

        results = {
            'points': points,
            'fraction_within_4sigma': within / total,
            'fit': self._fit_decay(exact.times, eigen, exact.eigen_basis[0])
        }
        oracle = {
            'initial_state': '00',
            'energies': energies.tolist(),
            'fit_exact': self._fit_decay(exact.times, exact.eigen_basis, exact.eigen_basis[0]),
            'predicted_T1': self._predicted_decay(params)
        }
        return self._report(config, results, oracle, started, series)

    def _predicted_decay(self, params: TfimParams) -> Optional[float]:
        try:
            return self.oracle_service.predicted_decay_time(params.dt, params.p)
        except ValueError:
            return None

    def _fit_decay(self, times, populations: np.ndarray, initial: np.ndarray) -> Dict:
        """Shared and per-level fits over the eigenpopulations that start away from 1/4."""
        levels = self.oracle_service.resolvable_levels(initial)
        fit: Dict = {'levels': levels, 'per_level': {}}
        if not levels:
            fit['error'] = "No eigenpopulation starts far enough from 1/4 to fit"
            return fit
        try:
            t1, stderr = self.oracle_service.fit_shared_decay_time(times, populations[:, levels])
            fit['T1'], fit['T1_stderr'] = t1, stderr
        except (FitError, ValueError) as e:
            fit['error'] = str(e)
            fit['diagnostics'] = getattr(e, 'diagnostics', {})
            log.warning("Shared decay fit failed: %s", e)
        for level in levels:
            try:
                t1, stderr = self.oracle_service.fit_decay_time(times, populations[:, level])
                fit['per_level'][str(level)] = {'T1': t1, 'T1_stderr': stderr}
            except (FitError, ValueError) as e:
                fit['per_level'][str(level)] = {'error': str(e)}
        return fit

    def run_ancilla_compare(self, config: ExperimentConfig) -> RunReport:
        """
        Dilated (ancilla) expectation against the sampled estimate and the
        analytic value, with the resource rows of both methods.
        """
        started = time.perf_counter()
        points, series = [], []
        for n in range(config.n_min, config.n_max + 1):
            if config.p == 0:
                channel = self.channel_service.identity_channel(n)
            else:
                channel = self.channel_service.depolarizing(n, config.p)
            m = self.channel_service.term_count(channel)
            observable = PauliString.single(n, 0, 'Z')

            dilated = self.ancilla_service.build_dilated(channel, n, cap=self.sim_config.dilation_term_cap)
            dilated_value = self.ancilla_service.run_dilated_expectation(
                dilated, PREP_ZERO, observable, dense_cap=self.sim_config.dense_qubit_cap
            )
            rho = self.oracle_service.apply_channel_exact(DensityMatrix.basis_state(n), channel)
            analytic = self.oracle_service.depolarized_expectation(observable, n, config.p, trace_o_rho=1.0)
            report = self.estimator_service.estimate(
                channel, PREP_ZERO, observable, config.shots,
                backend=config.backend, seed=config.seed, mode=config.mode,
                tag=f"ancilla-compare/{n}"
            )
            hybrid_variance = self.estimator_service.predicted_variance_hybrid(
                channel, PREP_ZERO, observable, config.shots
            )
            stinespring_variance = self.estimator_service.predicted_variance_stinespring(
                channel, PREP_ZERO, observable, config.shots
            )
            ancilla_row = self.ancilla_service.resource_estimate(n, m)
            hybrid_row = self.ancilla_service.hybrid_resources(n, m, config.shots)
            points.append({
                'n': n,
                'm': m,
                'observable': observable.to_text(),
                'dilated': dilated_value,
                'density_matrix': self.oracle_service.expectation_exact(rho, observable),
                'analytic': analytic,
                'hybrid_estimate': report.mean,
                'hybrid_stderr': report.standard_error,
                'variance_hybrid': hybrid_variance,
                'variance_stinespring': stinespring_variance,
                'resources': {'ancilla': ancilla_row.to_dict(), 'hybrid': hybrid_row.to_dict()}
            })
            series.append({
                'n': n, 'm': m, 'dilated': dilated_value, 'analytic': analytic,
                'hybrid_estimate': report.mean, 'ancilla_qubits': ancilla_row.qubits,
                'hybrid_qubits': hybrid_row.qubits, 'ancilla_segments': ancilla_row.depth_lower_bound,
                'hybrid_circuits': hybrid_row.circuits
            })
            log.info("n=%d: dilated %.6f, hybrid %.6f, analytic %.6f", n, dilated_value, report.mean, analytic)
        oracle = {'formula': '(1 - lambda) Tr[O rho] + lambda Tr[O] / 2^n'}
        return self._report(config, {'points': points}, oracle, started, series)

    def run_variance_check(self, config: ExperimentConfig) -> RunReport:
        """
        Empirical variance of the estimate over independently seeded runs
        against the hybrid and Stinespring predictions.
        """
        started = time.perf_counter()
        channel = self.channel_service.load_channel_spec(config.channel_path)
        observable = PauliString.from_text(config.observable)
        if observable.n != channel.n:
            raise ValueError(f"Observable {config.observable!r} does not act on the channel's {channel.n} qubits")

        means = []
        for r in range(config.runs):
            report = self.estimator_service.estimate(
                channel, config.state, observable, config.shots,
                backend=config.backend, seed=derive_seed(config.seed, 'variance-check', r),
                mode=config.mode, tag='variance-check',
                dense_cap=self.sim_config.dense_qubit_cap,
                enumeration_cap=self.sim_config.enumeration_cap
            )
            means.append(report.mean)
        means = np.asarray(means)
        empirical = float(means.var(ddof=1))

        predictions = {}
        for name, predictor in (
            ('hybrid', self.estimator_service.predicted_variance_hybrid),
            ('stinespring', self.estimator_service.predicted_variance_stinespring),
        ):
            try:
                predictions[name] = predictor(channel, config.state, observable, config.shots)
            except CapacityError as e:
                log.warning("No %s variance prediction: %s", name, e)
                predictions[name] = None
        exact = self.oracle_service.channel_expectation(
            channel, config.state, observable,
            cap=self.sim_config.enumeration_cap, dense_cap=self.sim_config.dense_qubit_cap
        )

        reference = predictions['hybrid']
        results = {
            'points': [{'run': r, 'estimate': float(v)} for r, v in enumerate(means)],
            'mean_of_estimates': float(means.mean()),
            'empirical_variance': empirical,
            'relative_error': None if not reference else abs(empirical - reference) / reference
        }
        if exact is not None and reference is not None:
            results['unbiased_within_4sigma'] = bool(
                abs(means.mean() - exact) <= SIGMA_BOUND * np.sqrt(reference / config.runs) + 1e-12
            )
        oracle = {
            'expectation': exact,
            'predicted_variance_hybrid': predictions['hybrid'],
            'predicted_variance_stinespring': predictions['stinespring']
        }
        series = [{'run': r, 'estimate': float(v)} for r, v in enumerate(means)]
        return self._report(config, results, oracle, started, series)
