"""
Ancilla-based (linear combination of unitaries) baseline for enumerable channels.
"""
from typing import List, Sequence, Union
import logging
import math
import numpy as np

from src.config import DEFAULT_DENSE_QUBIT_CAP, DEFAULT_DILATION_TERM_CAP, DEFAULT_ORACLE_QUBIT_CAP
from src.errors import CapacityError, DimensionError
from src.models.CircuitSeq import CircuitSeq
from src.models.DensityMatrix import DensityMatrix
from src.models.DilatedCircuit import DilatedCircuit, ancilla_count
from src.models.Gate import Gate
from src.models.Observable import Observable
from src.models.PauliString import PauliString
from src.models.QuantumState import Backend, DenseState, apply_matrix, pauli_phases
from src.models.RandomUnitaryChannel import RandomUnitaryChannel
from src.models.ResourceEstimate import HYBRID_VARIANCE, STINESPRING_VARIANCE, ResourceEstimate
from src.services.ChannelService import ChannelService
from src.services.EngineService import EngineService

log = logging.getLogger(__name__)

PROBABILITY_TOLERANCE = 1e-10


class AncillaService:
    @staticmethod
    def uniformly_controlled_ry(thetas: Sequence[float], controls: Sequence[int], target: int) -> List[Gate]:
        """
        Multiplexed RY: applies RY(thetas[j]) to target when the controls
        hold pattern j (controls[i] is bit i of j).

        Decomposes recursively on the last control c: with lo/hi the halves
        for c = 0/1, RY(lo) = RY(a) RY(b) and RY(hi) = RY(a) X RY(b) X for
        a = (lo + hi)/2, b = (lo - hi)/2.

        Returns:
            RY and CX gates in application order
        """
        k = len(controls)
        if len(thetas) != 2 ** k:
            raise ValueError(f"{k} control(s) need {2 ** k} angles, got {len(thetas)}")
        if k == 0:
            return [Gate('RY', [target], theta=float(thetas[0]))]
        half = 2 ** (k - 1)
        lo = np.asarray(thetas[:half], dtype=float)
        hi = np.asarray(thetas[half:], dtype=float)
        inner = list(controls[:-1])
        last = controls[-1]
        return (
            AncillaService.uniformly_controlled_ry((lo + hi) / 2, inner, target)
            + [Gate('CX', [last, target])]
            + AncillaService.uniformly_controlled_ry((lo - hi) / 2, inner, target)
            + [Gate('CX', [last, target])]
        )

    @staticmethod
    def build_state_prep(probs: Sequence[float]) -> CircuitSeq:
        """
        Circuit on ceil(log2 m) ancillas mapping |0...0> to sum_i sqrt(p_i) |i>.

        Qubits are fixed from the most significant down; each level splits
        the weight of every already-fixed prefix with a multiplexed RY.
        Patterns i >= m get amplitude 0.

        Raises:
            ValueError: Empty or invalid distribution
        """
        weights = AncillaService._validate_probs(probs)
        a = ancilla_count(len(weights))
        circuit = CircuitSeq(a)
        if a == 0:
            return circuit
        padded = np.zeros(2 ** a)
        padded[:len(weights)] = weights
        for q in range(a - 1, -1, -1):
            split = padded.reshape(2 ** (a - q - 1), 2, 2 ** q).sum(axis=2)
            thetas = 2 * np.arctan2(np.sqrt(split[:, 1]), np.sqrt(split[:, 0]))
            for gate in AncillaService.uniformly_controlled_ry(thetas, list(range(q + 1, a)), q):
                circuit.append(gate)
        return circuit

    @staticmethod
    def _validate_probs(probs) -> np.ndarray:
        weights = np.asarray(probs, dtype=float)
        if weights.ndim != 1 or weights.size == 0:
            raise ValueError("State preparation needs at least one probability")
        if np.any(weights < 0):
            raise ValueError("Probabilities must be non-negative")
        if abs(math.fsum(weights) - 1) > PROBABILITY_TOLERANCE:
            raise ValueError(f"probabilities sum to {math.fsum(weights):.12g}")
        return weights

    @staticmethod
    def prep_amplitudes(prep: CircuitSeq) -> np.ndarray:
        """Amplitudes the ancilla preparation produces from |0...0>."""
        state = DenseState(prep.n)
        return EngineService.apply_circuit(state, prep).amplitudes

    @staticmethod
    def build_dilated(
        channel: RandomUnitaryChannel,
        n_target: int,
        cap: int = DEFAULT_DILATION_TERM_CAP
    ) -> DilatedCircuit:
        """
        Ancilla preparation followed by one pattern-controlled block per term.

        Raises:
            CapacityError: The channel has more than cap terms
            DimensionError: The channel does not act on n_target qubits
        """
        if channel.n != n_target:
            raise DimensionError(f"Channel acts on {channel.n} qubits, target register has {n_target}")
        explicit = ChannelService.enumerate_explicit(channel, cap)
        prep = AncillaService.build_state_prep(explicit.probs)
        multiplexer = list(enumerate(explicit.unitaries))
        dilated = DilatedCircuit(n_target, explicit.probs, prep, multiplexer)
        log.debug("Built %s with %d prep gates", dilated, len(prep))
        return dilated

    @staticmethod
    def _dilated_block(
        d: DilatedCircuit,
        prep_target: Union[str, CircuitSeq],
        dense_cap: int
    ) -> np.ndarray:
        """
        Joint amplitudes after the multiplexer, shaped (2^n_ancilla, 2^n_target);
        row i is the target branch under ancilla pattern i.
        """
        if d.total_qubits > dense_cap:
            raise CapacityError(f"Dilated register of {d.total_qubits} qubits exceeds the dense cap of {dense_cap}")
        target = EngineService.prepare(prep_target, d.n_target, Backend.DENSE, dense_cap=dense_cap).amplitudes
        block = np.outer(AncillaService.prep_amplitudes(d.prep), target)
        for pattern, u in d.multiplexer:
            row = block[pattern]
            for gate in u.as_circuit():
                row = apply_matrix(row, d.n_target, gate.matrix(), gate.targets)
            block[pattern] = row
        return block

    @staticmethod
    def run_dilated_expectation(
        d: DilatedCircuit,
        prep_target: Union[str, CircuitSeq],
        observable: Union[Observable, PauliString, str],
        dense_cap: int = DEFAULT_DENSE_QUBIT_CAP
    ) -> float:
        """
        <Psi|(O ⊗ I_ancilla)|Psi> on the dilated pure state.

        Raises:
            CapacityError: Joint register beyond the dense cap
        """
        if isinstance(observable, str):
            observable = PauliString.from_text(observable)
        if isinstance(observable, PauliString):
            observable = Observable.single(observable)
        if observable.n != d.n_target:
            raise DimensionError(f"Observable acts on {observable.n} qubits, target register has {d.n_target}")
        block = AncillaService._dilated_block(d, prep_target, dense_cap)
        index = np.arange(2 ** d.n_target)
        total = 0.0
        for c, p in observable.terms:
            image = np.empty_like(block)
            image[:, index ^ p.x_mask] = block * pauli_phases(d.n_target, p)[None, :]
            total += c * float(np.real(np.vdot(block, image)))
        return total

    @staticmethod
    def reduced_target_state(
        d: DilatedCircuit,
        prep_target: Union[str, CircuitSeq],
        cap: int = DEFAULT_ORACLE_QUBIT_CAP
    ) -> DensityMatrix:
        """Partial trace of the dilated state over the ancillas."""
        if d.n_target > cap:
            raise CapacityError(f"Reduced state on {d.n_target} qubits exceeds the oracle cap of {cap}")
        block = AncillaService._dilated_block(d, prep_target, DEFAULT_DENSE_QUBIT_CAP)
        return DensityMatrix(block.T @ block.conj())

    @staticmethod
    def resource_estimate(n: int, m: int) -> ResourceEstimate:
        """Ancilla method: n + ceil(log2 m) qubits, m controlled segments, one circuit."""
        a = ancilla_count(m)
        return ResourceEstimate(
            method='ancilla',
            qubits=n + a,
            depth_lower_bound=m,
            circuits=1,
            controlled_op_count=m,
            controls_per_op=a,
            variance_formula=STINESPRING_VARIANCE
        )

    @staticmethod
    def hybrid_resources(n: int, m: int, shots: int) -> ResourceEstimate:
        """Sampled method: n qubits, one operator deep, at most min(m, N) distinct circuits."""
        if m < 1 or shots < 1:
            raise ValueError(f"Need m >= 1 and N >= 1, got m={m}, N={shots}")
        return ResourceEstimate(
            method='hybrid',
            qubits=n,
            depth_lower_bound=1,
            circuits=min(m, shots),
            controlled_op_count=0,
            controls_per_op=0,
            variance_formula=HYBRID_VARIANCE
        )
