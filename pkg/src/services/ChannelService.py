"""
Channel construction, sampling, composition, enumeration and spec parsing.
"""
from typing import Dict, Union
import itertools
import json
import logging
import math
import numpy as np

from src.config import DEFAULT_ENUMERATION_CAP, DEFAULT_ORACLE_QUBIT_CAP
from src.errors import CapacityError, ChannelSpecError, ChannelValidationError, DimensionError
from src.models.CircuitSeq import CircuitSeq
from src.models.Gate import Gate, parse_complex_matrix
from src.models.PauliString import PauliString
from src.models.RandomUnitaryChannel import (
    ComposedChannel,
    DepolarizingChannel,
    ExplicitChannel,
    RandomUnitaryChannel,
)
from src.models.Unitary import Unitary
from src.services.EngineService import EngineService
from src.services.PauliService import PauliService

log = logging.getLogger(__name__)

SPEC_SUM_TOLERANCE = 1e-6


class ChannelService:
    @staticmethod
    def depolarizing(n: int, p: float) -> DepolarizingChannel:
        """
        n-qubit depolarizing channel, sampled without listing its 4^n terms.

        Raises:
            ValueError: If p is outside [0, 1] or n outside [1, 31]
        """
        return DepolarizingChannel(n, p)

    @staticmethod
    def identity_channel(n: int) -> ExplicitChannel:
        """Channel that always applies the identity."""
        return ExplicitChannel([1.0], [Unitary.from_pauli(PauliString.identity(n))])

    @staticmethod
    def sample_operator(channel: RandomUnitaryChannel, rng: np.random.Generator) -> Unitary:
        """
        Draw one operator from the channel's distribution.

        Args:
            channel: Any channel variant
            rng: Caller-owned generator

        Returns:
            Explicit: a categorical draw; Depolarizing: identity with
            probability 1-p, else a uniform non-identity string; Composed:
            one draw per step, concatenated in application order
        """
        if isinstance(channel, ExplicitChannel):
            if len(channel.probs) == 1:
                return channel.unitaries[0]
            index = int(rng.choice(len(channel.probs), p=channel.probs))
            return channel.unitaries[index]
        if isinstance(channel, DepolarizingChannel):
            if rng.random() < 1 - channel.p:
                return Unitary.from_pauli(PauliString.identity(channel.n))
            return Unitary.from_pauli(PauliService.sample_nonidentity_uniform(channel.n, rng))
        if isinstance(channel, ComposedChannel):
            circuit = CircuitSeq(channel.n)
            for step in channel.steps:
                circuit = circuit.then(ChannelService.sample_operator(step, rng).as_circuit())
            return Unitary.from_circuit(circuit)
        raise ValueError(f"Unknown channel type: {type(channel).__name__}")

    @staticmethod
    def sample_pauli_indices(channel: DepolarizingChannel, count: int, rng: np.random.Generator) -> np.ndarray:
        """
        Draw count depolarizing operators at once as base-4 Pauli indices
        (see PauliString.from_index); index 0 is the identity.
        """
        if not isinstance(channel, DepolarizingChannel):
            raise ValueError("Batch index sampling needs a depolarizing channel")
        if count < 1:
            raise ValueError(f"Draw count must be positive, got {count}")
        identity = rng.random(count) < 1 - channel.p
        drawn = rng.integers(1, 4 ** channel.n, size=count, dtype=np.int64)
        return np.where(identity, 0, drawn)

    @staticmethod
    def compose(a: RandomUnitaryChannel, b: RandomUnitaryChannel) -> ComposedChannel:
        """
        a ∘ b: b's draw is applied first, then a's.

        Raises:
            DimensionError: If the channels act on different qubit counts
        """
        if a.n != b.n:
            raise DimensionError(f"Cannot compose channels on {a.n} and {b.n} qubits")
        return ComposedChannel([b, a])

    @staticmethod
    def term_count(channel: RandomUnitaryChannel) -> int:
        """Number of terms the full enumeration would hold."""
        if isinstance(channel, ExplicitChannel):
            return len(channel.probs)
        if isinstance(channel, DepolarizingChannel):
            return 4 ** channel.n
        return math.prod(ChannelService.term_count(s) for s in channel.steps)

    @staticmethod
    def enumerate_explicit(channel: RandomUnitaryChannel, cap: int = DEFAULT_ENUMERATION_CAP) -> ExplicitChannel:
        """
        Full (probs, unitaries) list of a channel.

        Raises:
            CapacityError: If the term count exceeds cap
        """
        count = ChannelService.term_count(channel)
        if count > cap:
            raise CapacityError(f"{channel} has {count} terms, above the enumeration cap of {cap}")
        if isinstance(channel, ExplicitChannel):
            return channel
        if isinstance(channel, DepolarizingChannel):
            size = 4 ** channel.n
            weight = channel.p / (size - 1)
            probs = [1 - channel.p] + [weight] * (size - 1)
            unitaries = [Unitary.from_pauli(PauliString.from_index(channel.n, k)) for k in range(size)]
            return ExplicitChannel(probs, unitaries)
        enumerated = [ChannelService.enumerate_explicit(s, cap) for s in channel.steps]
        if len(enumerated) == 1:
            return enumerated[0]
        probs, unitaries = [], []
        for combo in itertools.product(*(range(len(e.probs)) for e in enumerated)):
            probs.append(math.prod(e.probs[i] for e, i in zip(enumerated, combo)))
            circuit = CircuitSeq(channel.n)
            for e, i in zip(enumerated, combo):
                circuit = circuit.then(e.unitaries[i].as_circuit())
            unitaries.append(Unitary.from_circuit(circuit))
        log.debug("Enumerated %s into %d terms", channel, len(probs))
        return ExplicitChannel(probs, unitaries)

    @staticmethod
    def is_clifford(channel: RandomUnitaryChannel) -> bool:
        """True when every operator the channel can draw is Clifford."""
        if isinstance(channel, DepolarizingChannel):
            return True
        if isinstance(channel, ExplicitChannel):
            return all(u.is_clifford for u in channel.unitaries)
        return all(ChannelService.is_clifford(s) for s in channel.steps)

    @staticmethod
    def is_pauli_only(channel: RandomUnitaryChannel) -> bool:
        """True when every draw is returned as a bare Pauli string."""
        if isinstance(channel, DepolarizingChannel):
            return True
        if isinstance(channel, ExplicitChannel):
            return all(u.kind == Unitary.PAULI for u in channel.unitaries)
        return False

    @staticmethod
    def unitary_matrix(u: Unitary, cap: int = DEFAULT_ORACLE_QUBIT_CAP) -> np.ndarray:
        """Dense 2^n x 2^n matrix of a channel operator."""
        if u.n > cap:
            raise CapacityError(f"Operator on {u.n} qubits exceeds the matrix cap of {cap}")
        if u.kind == Unitary.PAULI:
            return u.pauli.to_matrix()
        return EngineService.circuit_matrix(u.as_circuit(), cap=cap)

    @staticmethod
    def parse_channel_spec(text: str) -> ExplicitChannel:
        """
        Parse a channel-spec document.

        Format: {"n": int, "terms": [{"p": real, "op": OP}, ...]} where OP is a
        Pauli text form ("XIZY"), {"gates": [gate, ...]}, or a row-major
        2^n x 2^n matrix with real or [re, im] entries. Unknown fields are
        rejected. Probabilities summing to 1 within 1e-6 are renormalized.

        Raises:
            ChannelSpecError: Malformed document (with line/column for syntax errors)
            ChannelValidationError: A channel invariant is violated
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ChannelSpecError(f"Invalid channel spec: {e.msg}", e.lineno, e.colno)

        if not isinstance(data, dict):
            raise ChannelSpecError("Channel spec must be an object")
        ChannelService._reject_unknown(data, {'n', 'terms'}, "channel spec")
        if 'n' not in data or 'terms' not in data:
            raise ChannelSpecError("Channel spec needs both 'n' and 'terms'")
        n = data['n']
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ChannelSpecError(f"'n' must be a positive integer, got {n!r}")
        terms = data['terms']
        if not isinstance(terms, list) or not terms:
            raise ChannelSpecError("'terms' must be a non-empty list")

        probs, unitaries = [], []
        for i, term in enumerate(terms):
            if not isinstance(term, dict):
                raise ChannelSpecError(f"Term {i} must be an object")
            ChannelService._reject_unknown(term, {'p', 'op'}, f"term {i}")
            if 'p' not in term or 'op' not in term:
                raise ChannelSpecError(f"Term {i} needs both 'p' and 'op'")
            p = term['p']
            if not isinstance(p, (int, float)) or isinstance(p, bool):
                raise ChannelSpecError(f"Term {i}: 'p' must be a number")
            if p < 0:
                raise ChannelValidationError(f"negative probability {p:g} at term {i}")
            probs.append(float(p))
            unitaries.append(ChannelService._parse_op(term['op'], n, i))

        total = math.fsum(probs)
        if abs(total - 1) > SPEC_SUM_TOLERANCE:
            raise ChannelValidationError(f"probabilities sum to {total:.12g}")
        return ExplicitChannel([p / total for p in probs], unitaries)

    @staticmethod
    def load_channel_spec(path: str) -> ExplicitChannel:
        """Read and parse a channel-spec file."""
        with open(path, 'r') as f:
            return ChannelService.parse_channel_spec(f.read())

    @staticmethod
    def channel_to_dict(channel: ExplicitChannel) -> Dict:
        """Channel-spec document for an explicit channel."""
        terms = []
        for p, u in zip(channel.probs, channel.unitaries):
            if u.kind == Unitary.PAULI:
                op: Union[str, Dict, list] = u.pauli.to_text()
            elif u.kind == Unitary.DENSE and u.gate.targets == tuple(range(u.n)):
                op = u.gate.to_dict()['matrix']
            else:
                op = {'gates': [g.to_dict() for g in u.as_circuit().gates]}
            terms.append({'p': p, 'op': op})
        return {'n': channel.n, 'terms': terms}

    @staticmethod
    def _parse_op(op, n: int, index: int) -> Unitary:
        try:
            if isinstance(op, str):
                pauli = PauliString.from_text(op)
                if pauli.n != n:
                    raise DimensionError(f"Pauli {op!r} acts on {pauli.n} qubits, spec declares {n}")
                return Unitary.from_pauli(pauli)
            if isinstance(op, dict):
                ChannelService._reject_unknown(op, {'gates'}, f"term {index} op")
                gates = op.get('gates')
                if not isinstance(gates, list):
                    raise ChannelSpecError(f"Term {index}: 'gates' must be a list")
                return Unitary.from_circuit(CircuitSeq(n, [Gate.from_dict(g) for g in gates]))
            if isinstance(op, list):
                matrix = parse_complex_matrix(op)
                if matrix.shape != (2 ** n, 2 ** n):
                    raise DimensionError(f"Matrix of shape {matrix.shape} does not act on {n} qubits")
                return Unitary.from_matrix(matrix, n=n)
        except ChannelSpecError:
            raise
        except ValueError as e:
            raise ChannelValidationError(f"Term {index}: {e}")
        raise ChannelSpecError(f"Term {index}: 'op' must be a Pauli string, a gate list or a matrix")

    @staticmethod
    def _reject_unknown(data: Dict, allowed, where: str):
        unknown = set(data) - set(allowed)
        if unknown:
            raise ChannelSpecError(f"Unknown field(s) in {where}: {', '.join(sorted(unknown))}")
