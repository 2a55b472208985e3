"""
Shot allocation and the sampled expectation estimator.
"""
from typing import Dict, List, Sequence, Tuple, Union
import logging
import numpy as np

from src.config import DEFAULT_DENSE_QUBIT_CAP, DEFAULT_ENUMERATION_CAP, DEFAULT_ORACLE_QUBIT_CAP
from src.errors import CapacityError, DimensionError
from src.models.CircuitSeq import CircuitSeq
from src.models.DensityMatrix import DensityMatrix
from src.models.EstimateReport import EstimateReport
from src.models.Observable import Observable
from src.models.PauliString import PauliString
from src.models.QuantumState import Backend, DenseState
from src.models.RandomUnitaryChannel import DepolarizingChannel, ExplicitChannel, RandomUnitaryChannel
from src.models.ShotPlan import ShotPlan
from src.models.Unitary import Unitary
from src.pool import run_tasks
from src.seed import substream
from src.services.ChannelService import ChannelService
from src.services.EngineService import PREP_ZERO, EngineService
from src.services.OracleService import OracleService
from src.services.PauliService import PauliService

log = logging.getLogger(__name__)

MODE_SHOT = 'shot'
MODE_EXACT = 'exact-subcircuit'
MODES = (MODE_SHOT, MODE_EXACT)

# evaluation routes besides the full backends
ROUTE_BASIS = 'basis'
ROUTE_PAULI_FRAME = 'pauli-frame'
AUTO = 'auto'


def _single_term(observable: Union[Observable, PauliString, str]) -> Tuple[float, PauliString]:
    if isinstance(observable, str):
        observable = PauliString.from_text(observable)
    if isinstance(observable, PauliString):
        return 1.0, observable
    if not observable.is_single_term:
        raise ValueError("Estimator takes a single Pauli term; estimate multi-term observables term by term")
    return observable.terms[0]


class EstimatorService:
    @staticmethod
    def allocate_shots(channel: RandomUnitaryChannel, shots: int, rng: np.random.Generator) -> ShotPlan:
        """
        Distribute shots over the channel's operators.

        Explicit channels draw multinomial counts over their terms.
        Depolarizing and composed channels draw every shot's operator and
        group identical operators in first-drawn order; operators carrying
        dense matrices are never grouped.

        Args:
            channel: Any channel variant
            shots: Total shot count N
            rng: Caller-owned generator

        Returns:
            ShotPlan whose counts sum to N
        """
        if not isinstance(shots, (int, np.integer)) or shots < 1:
            raise ValueError(f"Shot count must be a positive integer, got {shots!r}")
        if isinstance(channel, ExplicitChannel):
            counts = rng.multinomial(shots, channel.probs)
            draws = [(u, int(c)) for u, c in zip(channel.unitaries, counts) if c > 0]
        elif isinstance(channel, DepolarizingChannel):
            indices = ChannelService.sample_pauli_indices(channel, shots, rng)
            unique, first, counts = np.unique(indices, return_index=True, return_counts=True)
            order = np.argsort(first, kind='stable')
            draws = [
                (Unitary.from_pauli(PauliString.from_index(channel.n, int(unique[j]))), int(counts[j]))
                for j in order
            ]
        else:
            draws = EstimatorService._group_draws(
                ChannelService.sample_operator(channel, rng) for _ in range(shots)
            )
        log.debug("Allocated %d shots over %d distinct operator(s)", shots, len(draws))
        return ShotPlan(draws)

    @staticmethod
    def _group_draws(operators) -> List[Tuple[Unitary, int]]:
        groups: Dict[str, List] = {}
        draws: List[List] = []
        for u in operators:
            key = u.key()
            if key is None:
                draws.append([u, 1])
            elif key in groups:
                groups[key][1] += 1
            else:
                groups[key] = [u, 1]
                draws.append(groups[key])
        return [(u, c) for u, c in draws]

    @staticmethod
    def resolve_backend(
        channel: RandomUnitaryChannel,
        prep: Union[str, CircuitSeq],
        pauli: PauliString,
        backend: str = AUTO
    ) -> str:
        """
        Pick the evaluation route for an estimate.

        'basis': Pauli noise on |0^n> with an I/Z observable; each operator
        maps |0^n> to a basis state with a known outcome.
        'pauli-frame': Pauli noise on any preparation; U P U = +/- P, so one
        expectation of the prepared state serves every operator.
        Otherwise a full backend: stabilizer when everything is Clifford,
        factored for Bell-phase pairs, dense for the rest.
        """
        if backend != AUTO:
            return Backend(backend).value
        if ChannelService.is_pauli_only(channel):
            if prep == PREP_ZERO and pauli.is_diagonal:
                return ROUTE_BASIS
            return ROUTE_PAULI_FRAME
        prep_clifford = prep == PREP_ZERO or (isinstance(prep, CircuitSeq) and prep.is_clifford)
        if prep_clifford and ChannelService.is_clifford(channel):
            return Backend.STABILIZER.value
        if not isinstance(prep, CircuitSeq) and prep != PREP_ZERO:
            return Backend.FACTORED.value
        return Backend.DENSE.value

    @staticmethod
    def estimate(
        channel: RandomUnitaryChannel,
        prep: Union[str, CircuitSeq],
        observable: Union[Observable, PauliString, str],
        shots: int,
        backend: str = AUTO,
        seed: int = 0,
        mode: str = MODE_SHOT,
        tag: str = 'estimate',
        dense_cap: int = DEFAULT_DENSE_QUBIT_CAP,
        enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
        p_flip: float = 0.0
    ) -> EstimateReport:
        """
        Unbiased estimate of <O> on the channel output.

        Shot mode draws one eigenvalue per shot from the state after the
        shot's operator through EngineService.sample_pauli_eigenvalues;
        exact-subcircuit mode weights the exact expectation of each distinct
        operator by its shot share.

        Randomness comes from substreams of (seed, tag): path (0,) for the
        allocation, (1, i) for the i-th distinct operator and (2, i) for its
        readout flips, so the report does not depend on how groups are spread
        over workers.

        Args:
            channel: Channel to estimate through
            prep: 'zero', 'bell-pairs' or a preparation circuit
            observable: Single Pauli term
            shots: Total shot count N
            backend: 'auto', 'dense', 'factored' or 'stabilizer'
            seed: Master seed
            mode: 'shot' or 'exact-subcircuit'
            tag: Substream tag; distinct estimates sharing a seed need distinct tags
            p_flip: Per-bit readout flip rate applied to shot outcomes

        Returns:
            EstimateReport with predicted and empirical variances

        Raises:
            UnsupportedGateError: Stabilizer backend meets a non-Clifford gate
            CapacityError: A state exceeds its backend cap
        """
        if mode not in MODES:
            raise ValueError(f"Unknown estimator mode: {mode!r}")
        if not 0 <= p_flip <= 1:
            raise ValueError(f"Bit-flip rate must lie in [0, 1], got {p_flip}")
        coefficient, pauli = _single_term(observable)
        if pauli.n != channel.n:
            raise DimensionError(f"Observable acts on {pauli.n} qubits, channel on {channel.n}")
        route = EstimatorService.resolve_backend(channel, prep, pauli, backend)
        plan = EstimatorService.allocate_shots(channel, shots, substream(seed, tag, 0))
        log.debug("Estimating %s through %s on route %s in %s mode", pauli, channel, route, mode)

        evaluate = EstimatorService._group_evaluator(channel, prep, pauli, route, dense_cap)
        # readout flips on the measured bits negate the parity with probability (1 - contrast) / 2
        contrast = (1 - 2 * p_flip) ** pauli.weight

        def run_group(item):
            i, (u, count) = item
            value, sample = evaluate(u)
            if mode == MODE_EXACT:
                return contrast * value, None
            sampled = sample(count, substream(seed, tag, 1, i))
            if p_flip > 0 and not pauli.is_identity:
                flipped = substream(seed, tag, 2, i).random(count) < (1 - contrast) / 2
                sampled = np.where(flipped, -sampled, sampled).astype(np.int8)
            return value, sampled

        results = run_tasks(run_group, enumerate(plan.draws))

        per_draw = []
        outcomes = []
        for (u, count), (value, sampled) in zip(plan.draws, results):
            if sampled is None:
                group = np.full(count, value, dtype=float)
            else:
                group = sampled.astype(float)
            outcomes.append(group)
            per_draw.append({'operator': u.label(), 'shots': count, 'mean': coefficient * float(group.mean())})
        outcomes = coefficient * np.concatenate(outcomes)
        mean = float(outcomes.mean())
        empirical = float(outcomes.var(ddof=1)) / plan.total if plan.total > 1 else 0.0

        exact = OracleService.channel_expectation(
            channel, prep, pauli, cap=enumeration_cap, dense_cap=dense_cap
        )
        if exact is not None:
            predicted = (coefficient ** 2 - (coefficient * contrast * exact) ** 2) / plan.total
            source = 'oracle'
        else:
            predicted = (coefficient ** 2 - mean ** 2) / plan.total
            source = 'plug-in'

        return EstimateReport(
            mean=mean,
            n_shots=plan.total,
            predicted_variance=predicted,
            empirical_variance=empirical,
            per_draw=per_draw,
            seed=seed,
            mode=mode,
            backend=route,
            variance_source=source
        )

    @staticmethod
    def _group_evaluator(
        channel: RandomUnitaryChannel,
        prep: Union[str, CircuitSeq],
        pauli: PauliString,
        route: str,
        dense_cap: int
    ):
        """
        Function mapping one operator to the exact <P> on the prepared state
        after it, and a sampler of count shot outcomes for that operator.
        """
        n = channel.n
        if route == ROUTE_BASIS:
            zeros = [0] * n

            def basis_group(u: Unitary):
                bits, _ = PauliService.apply_to_basis(u.pauli, zeros)
                value = -1 if sum(bits[q] for q in pauli.support) % 2 else 1
                return float(value), lambda count, rng: np.full(count, value, dtype=np.int8)
            return basis_group

        if route == ROUTE_PAULI_FRAME:
            # U^dagger P U = sign P for Pauli U, so outcomes are sign times those on the prepared state
            backend = OracleService.prep_backend(prep, n, dense_cap)
            prepared = EngineService.prepare(prep, n, backend, dense_cap=dense_cap)
            base = EngineService.expectation(prepared, pauli)

            def frame_group(u: Unitary):
                sign = PauliService.conjugate_sign(pauli, u.pauli)
                return sign * base, lambda count, rng: (
                    sign * EngineService.sample_pauli_eigenvalues(prepared, pauli, count, rng)
                ).astype(np.int8)
            return frame_group

        prepared = EngineService.prepare(prep, n, route, dense_cap=dense_cap)

        def state_group(u: Unitary):
            state = EngineService.apply_unitary(prepared.copy(), u)
            return EngineService.expectation(state, pauli), lambda count, rng: (
                EngineService.sample_pauli_eigenvalues(state, pauli, count, rng)
            )
        return state_group

    @staticmethod
    def predicted_variance_hybrid(
        channel: RandomUnitaryChannel,
        prep: Union[str, CircuitSeq],
        observable: Union[Observable, PauliString, str],
        shots: int,
        cap: int = DEFAULT_ENUMERATION_CAP,
        dense_cap: int = DEFAULT_DENSE_QUBIT_CAP
    ) -> float:
        """
        (sum_i p_i <O^2>_i - <O>^2) / N with rho_i = U_i rho U_i^dagger.

        Raises:
            CapacityError: The channel has more terms than cap
        """
        observable = EstimatorService._as_observable(observable)
        explicit = ChannelService.enumerate_explicit(channel, cap)
        if channel.n > dense_cap:
            raise CapacityError(f"Variance oracle holds at most {dense_cap} qubits, got {channel.n}")
        state = EngineService.prepare(prep, channel.n, Backend.DENSE, dense_cap=dense_cap)
        second = 0.0
        first = 0.0
        for p, u in zip(explicit.probs, explicit.unitaries):
            evolved = EngineService.apply_unitary(state.copy(), u)
            o_psi = EstimatorService._apply_observable(evolved, observable)
            first += p * float(np.real(np.vdot(evolved.amplitudes, o_psi)))
            second += p * float(np.real(np.vdot(o_psi, o_psi)))
        return max(second - first ** 2, 0.0) / shots

    @staticmethod
    def predicted_variance_stinespring(
        channel: RandomUnitaryChannel,
        prep: Union[str, CircuitSeq],
        observable: Union[Observable, PauliString, str],
        shots: int,
        cap: int = DEFAULT_ENUMERATION_CAP,
        oracle_cap: int = DEFAULT_ORACLE_QUBIT_CAP
    ) -> float:
        """
        (<O^2> - <O>^2) / N on the channel output density matrix.

        Raises:
            CapacityError: Beyond the density-matrix or enumeration cap
        """
        observable = EstimatorService._as_observable(observable)
        if channel.n > oracle_cap:
            raise CapacityError(f"Density-matrix oracle holds at most {oracle_cap} qubits, got {channel.n}")
        state = EngineService.prepare(prep, channel.n, Backend.DENSE, dense_cap=oracle_cap)
        rho = OracleService.apply_channel_exact(DensityMatrix.from_statevector(state.amplitudes), channel, cap)
        o = observable.to_matrix()
        return max(rho.expectation(o @ o) - rho.expectation(o) ** 2, 0.0) / shots

    @staticmethod
    def mse(measured: Sequence[float], analytic: Sequence[float]) -> float:
        """Mean squared error between paired values."""
        measured = np.asarray(measured, dtype=float)
        analytic = np.asarray(analytic, dtype=float)
        if measured.shape != analytic.shape:
            raise ValueError(f"Length mismatch: {measured.size} measured vs {analytic.size} analytic values")
        if measured.size == 0:
            raise ValueError("MSE needs at least one value")
        return float(np.mean((measured - analytic) ** 2))

    @staticmethod
    def _as_observable(observable) -> Observable:
        if isinstance(observable, str):
            observable = PauliString.from_text(observable)
        if isinstance(observable, PauliString):
            return Observable.single(observable)
        return observable

    @staticmethod
    def _apply_observable(state: DenseState, observable: Observable) -> np.ndarray:
        """O|psi> as an amplitude vector."""
        result = np.zeros_like(state.amplitudes)
        for c, p in observable.terms:
            result += c * EngineService.apply_pauli(state.copy(), p).amplitudes
        return result
