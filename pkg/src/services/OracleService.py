"""
Exact classical references for the sampled estimators.
"""
from typing import Optional, Sequence, Tuple, Union
import logging
import warnings
import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit
from scipy.stats import binom

from src.config import DEFAULT_DENSE_QUBIT_CAP, DEFAULT_ENUMERATION_CAP
from src.errors import CapacityError, DimensionError, FitError
from src.models.CircuitSeq import CircuitSeq
from src.models.DensityMatrix import DensityMatrix
from src.models.Observable import Observable
from src.models.PauliString import PauliString
from src.models.PopulationSeries import PopulationSeries
from src.models.QuantumState import Backend
from src.models.RandomUnitaryChannel import DepolarizingChannel, RandomUnitaryChannel
from src.models.TfimParams import TfimParams
from src.services.ChannelService import ChannelService
from src.services.EngineService import PREP_BELL_PAIRS, PREP_ZERO, EngineService
from src.services.PauliService import PauliService

log = logging.getLogger(__name__)

MIXED_ASYMPTOTE = 0.25
MIN_FIT_POINTS = 5
# eigenpopulations closer than this to 1/4 at t=0 carry no decay signal
RESOLVABLE_DEVIATION = 0.05
AMPLITUDE_FLOOR = 1e-9

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_I = np.eye(2, dtype=complex)


def _decay(t, a, t1):
    return a * np.exp(-t / t1) + MIXED_ASYMPTOTE


class OracleService:
    @staticmethod
    def depolarizing_lambda(n: int, p: float) -> float:
        """lambda = 4^n / (4^n - 1) * p."""
        return DepolarizingChannel(n, p).depolarizing_lambda()

    @staticmethod
    def apply_channel_exact(
        rho: DensityMatrix,
        channel: RandomUnitaryChannel,
        cap: int = DEFAULT_ENUMERATION_CAP
    ) -> DensityMatrix:
        """
        sum_i p_i U_i rho U_i^dagger over the full enumeration.

        Raises:
            CapacityError: Too many terms, or rho beyond the oracle cap
            DimensionError: Channel and rho sizes differ
        """
        if channel.n != rho.n:
            raise DimensionError(f"Channel acts on {channel.n} qubits, density matrix on {rho.n}")
        explicit = ChannelService.enumerate_explicit(channel, cap)
        result = np.zeros_like(rho.matrix)
        for p, u in zip(explicit.probs, explicit.unitaries):
            if p == 0:
                continue
            matrix = ChannelService.unitary_matrix(u, cap=rho.n)
            result += p * (matrix @ rho.matrix @ matrix.conj().T)
        return DensityMatrix((result + result.conj().T) / 2)

    @staticmethod
    def expectation_exact(rho: DensityMatrix, observable: Union[Observable, PauliString]) -> float:
        """Tr[O rho]."""
        if isinstance(observable, PauliString):
            observable = Observable.single(observable)
        if observable.n != rho.n:
            raise DimensionError(f"Observable acts on {observable.n} qubits, density matrix on {rho.n}")
        return rho.expectation(observable.to_matrix())

    @staticmethod
    def depolarized_expectation(
        observable: Union[Observable, PauliString],
        n: int,
        p: float,
        rho: Optional[DensityMatrix] = None,
        trace_o_rho: Optional[float] = None
    ) -> float:
        """
        (1 - lambda) Tr[O rho] + lambda Tr[O] / 2^n.

        Args:
            observable: O
            n: Qubit count
            p: Depolarizing strength
            rho: Input state, used when trace_o_rho is not supplied
            trace_o_rho: Precomputed Tr[O rho] for states beyond the oracle cap
        """
        if isinstance(observable, PauliString):
            observable = Observable.single(observable)
        lam = OracleService.depolarizing_lambda(n, p)
        if trace_o_rho is None:
            if rho is None:
                raise ValueError("Need either rho or Tr[O rho]")
            trace_o_rho = OracleService.expectation_exact(rho, observable)
        # Tr[O]/2^n is the identity coefficient
        identity_part = sum(c for c, q in observable.terms if q.is_identity)
        return (1 - lam) * trace_o_rho + lam * identity_part

    @staticmethod
    def channel_expectation(
        channel: RandomUnitaryChannel,
        prep: Union[str, CircuitSeq],
        pauli: PauliString,
        cap: int = DEFAULT_ENUMERATION_CAP,
        dense_cap: int = DEFAULT_DENSE_QUBIT_CAP
    ) -> Optional[float]:
        """
        Exact <P> on the channel output for a prepared pure state, or None
        when no exact route is within the caps.

        Depolarizing channels use the lambda form; Pauli mixtures use
        U^dagger P U = +/- P; anything else is enumerated on dense copies.
        """
        n = channel.n
        if isinstance(channel, DepolarizingChannel):
            base = OracleService.prep_expectation(prep, n, pauli, dense_cap)
            return OracleService.depolarized_expectation(pauli, n, channel.p, trace_o_rho=base)
        if ChannelService.term_count(channel) > cap:
            return None
        explicit = ChannelService.enumerate_explicit(channel, cap)
        if ChannelService.is_pauli_only(explicit):
            base = OracleService.prep_expectation(prep, n, pauli, dense_cap)
            return float(sum(
                p * PauliService.conjugate_sign(pauli, u.pauli) * base
                for p, u in zip(explicit.probs, explicit.unitaries)
            ))
        if n > dense_cap:
            return None
        state = EngineService.prepare(prep, n, Backend.DENSE, dense_cap=dense_cap)
        total = 0.0
        for p, u in zip(explicit.probs, explicit.unitaries):
            evolved = EngineService.apply_unitary(state.copy(), u)
            total += p * evolved.expectation_pauli(pauli)
        return total

    @staticmethod
    def prep_expectation(
        prep: Union[str, CircuitSeq],
        n: int,
        pauli: PauliString,
        dense_cap: int = DEFAULT_DENSE_QUBIT_CAP
    ) -> float:
        """<psi|P|psi> for a prepared state, on the cheapest exact backend."""
        if prep == PREP_ZERO:
            # |0^n> is a +1 eigenstate of every I/Z string, orthogonal otherwise
            return 1.0 if pauli.is_diagonal else 0.0
        state = EngineService.prepare(prep, n, OracleService.prep_backend(prep, n, dense_cap), dense_cap=dense_cap)
        return state.expectation_pauli(pauli)

    @staticmethod
    def prep_backend(prep: Union[str, CircuitSeq], n: int, dense_cap: int = DEFAULT_DENSE_QUBIT_CAP) -> Backend:
        """Backend able to hold a preparation exactly."""
        if prep == PREP_BELL_PAIRS:
            return Backend.FACTORED
        if prep == PREP_ZERO or (isinstance(prep, CircuitSeq) and prep.is_clifford):
            return Backend.STABILIZER
        if n > dense_cap:
            raise CapacityError(f"Non-Clifford preparation on {n} qubits exceeds the dense cap of {dense_cap}")
        return Backend.DENSE

    @staticmethod
    def hamming_distribution(n: int, p: float, p_flip: float = 0.0) -> np.ndarray:
        """
        Hamming-weight law of the depolarized |0^n> read out with independent
        bit flips: (1 - lambda) Binom(n, p_flip) + lambda Binom(n, 1/2).

        Returns:
            Probabilities for weights 0..n
        """
        if not 0 <= p_flip <= 1:
            raise ValueError(f"Bit-flip rate must lie in [0, 1], got {p_flip}")
        lam = OracleService.depolarizing_lambda(n, p)
        weights = np.arange(n + 1)
        return (1 - lam) * binom.pmf(weights, n, p_flip) + lam * binom.pmf(weights, n, 0.5)

    @staticmethod
    def total_variation(a: Sequence[float], b: Sequence[float]) -> float:
        """Half the L1 distance between two distributions on the same support."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.shape != b.shape:
            raise ValueError(f"Distributions have different supports: {a.shape} vs {b.shape}")
        return float(0.5 * np.abs(a - b).sum())

    @staticmethod
    def tfim_hamiltonian(J: float, h: float) -> np.ndarray:
        """H = -J Z⊗Z - h (X⊗I + I⊗X), basis index b0 + 2 b1."""
        zz = np.kron(_Z, _Z)
        xs = np.kron(_I, _X) + np.kron(_X, _I)
        return -J * zz - h * xs

    @staticmethod
    def tfim_eigenbasis(J: float, h: float) -> Tuple[np.ndarray, np.ndarray]:
        """
        Eigenvalues (ascending) and eigenvectors of the TFIM Hamiltonian.

        Each eigenvector is rotated so its largest-magnitude component (the
        first one on ties) is real and positive.

        Returns:
            (energies, V) with V[:, k] the k-th eigenvector
        """
        energies, vectors = np.linalg.eigh(OracleService.tfim_hamiltonian(J, h))
        for k in range(vectors.shape[1]):
            column = vectors[:, k]
            magnitudes = np.abs(column)
            pivot = int(np.flatnonzero(magnitudes >= magnitudes.max() - 1e-9)[0])
            vectors[:, k] = column * (abs(column[pivot]) / column[pivot])
        return energies, vectors

    @staticmethod
    def tfim_propagator(J: float, h: float, dt: float) -> np.ndarray:
        """exp(-i H dt) by spectral decomposition."""
        energies, vectors = OracleService.tfim_eigenbasis(J, h)
        return vectors @ np.diag(np.exp(-1j * energies * dt)) @ vectors.conj().T

    @staticmethod
    def tfim_exact_evolve(
        params: TfimParams,
        initial: Optional[DensityMatrix] = None,
        noise_first: bool = False
    ) -> PopulationSeries:
        """
        Exact noisy TFIM evolution: each step applies the propagator and then
        the 2-qubit depolarizing channel (reversed with noise_first).

        Args:
            params: Couplings, step duration, step count and noise strength
            initial: Starting state; |00> when omitted

        Returns:
            Computational-basis and eigenbasis populations at t = k dt, k = 0..steps
        """
        rho = initial if initial is not None else DensityMatrix.basis_state(2)
        if rho.n != 2:
            raise DimensionError(f"TFIM evolution acts on 2 qubits, got {rho.n}")
        _, vectors = OracleService.tfim_eigenbasis(params.J, params.h)
        propagator = OracleService.tfim_propagator(params.J, params.h, params.dt)
        noise = DepolarizingChannel(2, params.p)

        comp, eigen = [], []
        for k in range(params.steps + 1):
            if k > 0:
                if noise_first:
                    rho = OracleService.apply_channel_exact(rho, noise)
                rho = DensityMatrix(propagator @ rho.matrix @ propagator.conj().T)
                if not noise_first:
                    rho = OracleService.apply_channel_exact(rho, noise)
            comp.append(np.real(np.diag(rho.matrix)))
            eigen.append(np.real(np.diag(vectors.conj().T @ rho.matrix @ vectors)))
        return PopulationSeries(params.times(), comp, eigen)

    @staticmethod
    def fit_decay_time(times: Sequence[float], populations: Sequence[float]) -> Tuple[float, float]:
        """
        Least-squares fit of a exp(-t/T1) + 1/4.

        Returns:
            (T1, standard error of T1)

        Raises:
            ValueError: Fewer than 5 points or populations outside [0, 1]
            FitError: The fit did not converge or its covariance is undefined
        """
        t, y = OracleService._check_fit_input(times, populations)
        a0 = y[0] - MIXED_ASYMPTOTE
        span = t[-1] - t[0]
        guess = OracleService._initial_decay_guess(t, y)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter('error', OptimizeWarning)
                params, cov = curve_fit(
                    _decay, t, y, p0=[a0, guess],
                    bounds=([-np.inf, span * 1e-6], [np.inf, np.inf]),
                    maxfev=10000, ftol=1e-12, xtol=1e-12, gtol=1e-12
                )
        except (RuntimeError, OptimizeWarning, ValueError) as e:
            raise FitError(f"Decay fit did not converge: {e}", {'points': len(t), 'initial_guess': guess})
        if abs(params[0]) < AMPLITUDE_FLOOR:
            raise FitError("Decay amplitude vanishes; T1 is unconstrained by the data", {'points': len(t)})
        stderr = float(np.sqrt(cov[1, 1]))
        if not np.isfinite(stderr):
            raise FitError("Decay time is unconstrained by the data", {'points': len(t), 'T1': float(params[1])})
        log.debug("Fitted T1=%.6g +/- %.3g over %d points", params[1], stderr, len(t))
        return float(params[1]), stderr

    @staticmethod
    def fit_shared_decay_time(times: Sequence[float], series) -> Tuple[float, float]:
        """
        Joint fit of several population curves sharing one T1, each with its
        own amplitude and the 1/4 asymptote.

        Args:
            times: Sample times
            series: (len(times), k) populations, one column per curve

        Returns:
            (T1, standard error of T1)
        """
        series = np.asarray(series, dtype=float)
        if series.ndim != 2 or series.shape[0] != len(times):
            raise ValueError(f"Expected ({len(times)}, k) populations, got {series.shape}")
        t, _ = OracleService._check_fit_input(times, series[:, 0])
        k = series.shape[1]
        guess = np.median([OracleService._initial_decay_guess(t, series[:, j]) for j in range(k)])

        def model(_, *params):
            amplitudes, t1 = np.asarray(params[:k]), params[k]
            return (amplitudes[None, :] * np.exp(-t / t1)[:, None] + MIXED_ASYMPTOTE).ravel()

        p0 = list(series[0] - MIXED_ASYMPTOTE) + [guess]
        lower = [-np.inf] * k + [(t[-1] - t[0]) * 1e-6]
        try:
            with warnings.catch_warnings():
                warnings.simplefilter('error', OptimizeWarning)
                params, cov = curve_fit(
                    model, np.tile(t, k), series.ravel(), p0=p0,
                    bounds=(lower, [np.inf] * (k + 1)), maxfev=20000
                )
        except (RuntimeError, OptimizeWarning, ValueError) as e:
            raise FitError(f"Shared decay fit did not converge: {e}", {'points': len(t), 'curves': k})
        if np.all(np.abs(params[:k]) < AMPLITUDE_FLOOR):
            raise FitError("Decay amplitudes vanish; T1 is unconstrained by the data", {'points': len(t), 'curves': k})
        stderr = float(np.sqrt(cov[k, k]))
        if not np.isfinite(stderr):
            raise FitError("Decay time is unconstrained by the data", {'points': len(t), 'curves': k})
        return float(params[k]), stderr

    @staticmethod
    def resolvable_levels(initial: Sequence[float]):
        """Indices of populations starting at least RESOLVABLE_DEVIATION away from 1/4."""
        return [i for i, q in enumerate(initial) if abs(q - MIXED_ASYMPTOTE) >= RESOLVABLE_DEVIATION]

    @staticmethod
    def _check_fit_input(times, populations) -> Tuple[np.ndarray, np.ndarray]:
        t = np.asarray(times, dtype=float)
        y = np.asarray(populations, dtype=float)
        if t.shape != y.shape:
            raise ValueError(f"{len(t)} times but {len(y)} populations")
        if len(t) < MIN_FIT_POINTS:
            raise ValueError(f"Decay fit needs at least {MIN_FIT_POINTS} points, got {len(t)}")
        if y.min() < 0 or y.max() > 1:
            raise ValueError("Populations must lie in [0, 1]")
        return t, y

    @staticmethod
    def _initial_decay_guess(t: np.ndarray, y: np.ndarray) -> float:
        """Log-slope estimate from the first and last deviations, else half the span."""
        span = t[-1] - t[0]
        d0, d1 = y[0] - MIXED_ASYMPTOTE, y[-1] - MIXED_ASYMPTOTE
        if span > 0 and d0 * d1 > 0 and abs(d1) < abs(d0):
            return float(span / np.log(d0 / d1))
        return float(span / 2) if span > 0 else 1.0

    @staticmethod
    def predicted_decay_time(dt: float, p: float, n: int = 2) -> float:
        """
        -dt / ln(1 - lambda): each step contracts the traceless part by 1 - lambda.

        Raises:
            ValueError: Unless 0 < lambda < 1
        """
        lam = OracleService.depolarizing_lambda(n, p)
        if not 0 < lam < 1:
            raise ValueError(f"Decay time needs 0 < lambda < 1, got lambda={lam:.6g}")
        return float(-dt / np.log1p(-lam))
