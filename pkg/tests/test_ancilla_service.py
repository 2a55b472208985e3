"""
Tests for the AncillaService class and the dilated-circuit model.
"""
import numpy as np
import pytest
from scipy.linalg import block_diag

from src.errors import CapacityError, DimensionError
from src.models.CircuitSeq import CircuitSeq
from src.models.DilatedCircuit import DilatedCircuit, ancilla_count
from src.models.Gate import Gate
from src.models.DensityMatrix import DensityMatrix
from src.models.PauliString import PauliString
from src.models.RandomUnitaryChannel import ExplicitChannel
from src.models.Unitary import Unitary
from src.services.AncillaService import AncillaService
from src.services.ChannelService import ChannelService
from src.services.EngineService import EngineService
from src.services.OracleService import OracleService


@pytest.mark.parametrize('m,expected', [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (64, 6)])
def test_ancilla_count(m, expected):
    """Test ceil(log2 m)."""
    assert ancilla_count(m) == expected


def test_ancilla_count_rejects_zero():
    """Test that at least one term is needed."""
    with pytest.raises(ValueError):
        ancilla_count(0)


def test_uniformly_controlled_ry_matrix():
    """Test the multiplexed rotation against its block-diagonal unitary."""
    thetas = [0.1, 0.7, -1.2, 2.5]
    gates = AncillaService.uniformly_controlled_ry(thetas, [1, 2], 0)
    matrix = EngineService.circuit_matrix(CircuitSeq(3, gates))
    expected = block_diag(*[Gate('RY', [0], theta=t).matrix() for t in thetas])

    np.testing.assert_allclose(matrix, expected, atol=1e-12)
    assert sum(1 for g in gates if g.kind == 'CX') == 6


def test_uniformly_controlled_ry_angle_count():
    """Test that k controls need 2^k angles."""
    with pytest.raises(ValueError, match="need 4 angles"):
        AncillaService.uniformly_controlled_ry([0.1, 0.2], [1, 2], 0)


@pytest.mark.parametrize('probs', [
    [1.0],
    [0.25, 0.75],
    [0.5, 0.25, 0.25],
    [0.1, 0.2, 0.3, 0.4],
    [0.05, 0.15, 0.2, 0.1, 0.5],
    [0.0, 0.0, 1.0],
])
def test_state_prep_amplitudes(probs):
    """Test that the preparation yields sqrt(p_i) on pattern i and zero past m."""
    prep = AncillaService.build_state_prep(probs)
    padded = np.zeros(2 ** ancilla_count(len(probs)))
    padded[:len(probs)] = probs

    np.testing.assert_allclose(AncillaService.prep_amplitudes(prep), np.sqrt(padded), atol=1e-12)


@pytest.mark.parametrize('probs,message', [
    ([], "at least one"),
    ([0.5, 0.4], "sum to"),
    ([1.5, -0.5], "non-negative"),
])
def test_state_prep_rejections(probs, message):
    """Test invalid distributions."""
    with pytest.raises(ValueError, match=message):
        AncillaService.build_state_prep(probs)


@pytest.mark.parametrize('n', [1, 2])
def test_dilated_depolarizing_expectation(n):
    """Test <Z_0> = 1 - lambda on the dilated depolarized zero state."""
    channel = ChannelService.depolarizing(n, 0.5)
    dilated = AncillaService.build_dilated(channel, n)
    value = AncillaService.run_dilated_expectation(dilated, 'zero', PauliString.single(n, 0, 'Z'))

    assert dilated.total_qubits == n + 2 * n
    assert value == pytest.approx(1 - channel.depolarizing_lambda())


def test_dilated_one_qubit_one_third():
    """Test the n = 1, p = 0.5 value 1/3."""
    dilated = AncillaService.build_dilated(ChannelService.depolarizing(1, 0.5), 1)

    assert AncillaService.run_dilated_expectation(dilated, 'zero', 'Z') == pytest.approx(1 / 3)


def test_dilated_general_channel_matches_oracle():
    """Test a non-Pauli channel with an uneven term count against enumeration."""
    channel = ExplicitChannel(
        [0.2, 0.5, 0.3],
        [
            Unitary.from_circuit(CircuitSeq(2).add('RY', 0, theta=0.9).add('CX', 0, 1)),
            Unitary.from_circuit(CircuitSeq(2).add('H', 1).add('T', 1)),
            Unitary.from_pauli(PauliString.from_text('YX')),
        ]
    )
    prep = CircuitSeq(2).add('RX', 1, theta=0.4)
    dilated = AncillaService.build_dilated(channel, 2)

    for text in ('ZI', 'XX', 'IY', 'ZZ'):
        pauli = PauliString.from_text(text)
        assert AncillaService.run_dilated_expectation(dilated, prep, pauli) == pytest.approx(
            OracleService.channel_expectation(channel, prep, pauli), abs=1e-12
        )


def test_reduced_target_state_matches_channel_output():
    """Test that tracing out the ancillas gives the channel output."""
    channel = ChannelService.depolarizing(2, 0.3)
    dilated = AncillaService.build_dilated(channel, 2)
    reduced = AncillaService.reduced_target_state(dilated, 'bell-pairs')
    psi = EngineService.prepare('bell-pairs', 2, 'dense').amplitudes
    expected = OracleService.apply_channel_exact(DensityMatrix.from_statevector(psi), channel)

    np.testing.assert_allclose(reduced.matrix, expected.matrix, atol=1e-12)


def test_build_dilated_caps():
    """Test the term cap and the size check."""
    with pytest.raises(CapacityError):
        AncillaService.build_dilated(ChannelService.depolarizing(4, 0.1), 4)
    with pytest.raises(DimensionError):
        AncillaService.build_dilated(ChannelService.depolarizing(1, 0.1), 2)


def test_run_dilated_dense_cap():
    """Test that the joint register must fit the dense cap."""
    dilated = AncillaService.build_dilated(ChannelService.depolarizing(2, 0.1), 2)

    with pytest.raises(CapacityError):
        AncillaService.run_dilated_expectation(dilated, 'zero', 'ZI', dense_cap=5)


def test_dilated_circuit_validation(bit_flip_channel):
    """Test multiplexer checks on the dilated-circuit model."""
    prep = AncillaService.build_state_prep(bit_flip_channel.probs)
    ops = bit_flip_channel.unitaries

    with pytest.raises(ValueError, match="distinct"):
        DilatedCircuit(1, [0.5, 0.5], prep, [(0, ops[0]), (0, ops[1])])
    with pytest.raises(ValueError, match="needs 2 entries"):
        DilatedCircuit(1, [0.5, 0.5], prep, [(0, ops[0])])
    with pytest.raises(ValueError, match="act on 1 qubits"):
        DilatedCircuit(1, [0.5, 0.5], prep, [(0, ops[0]), (1, Unitary.from_pauli(PauliString.from_text('XX')))])
    assert len(DilatedCircuit(1, [0.5, 0.5], prep, [(0, ops[0]), (1, ops[1])])) == 2


def test_resource_estimate_three_qubits():
    """Test the resource rows for n = 3, m = 64."""
    ancilla = AncillaService.resource_estimate(3, 64)
    hybrid = AncillaService.hybrid_resources(3, 64, 1000)

    assert ancilla.qubits == 9
    assert ancilla.depth_lower_bound == 64
    assert ancilla.controls_per_op == 6
    assert ancilla.circuits == 1
    assert hybrid.qubits == 3
    assert hybrid.depth_lower_bound == 1
    assert hybrid.circuits == 64
    assert AncillaService.hybrid_resources(3, 64, 10).circuits == 10


def test_hybrid_resources_rejections():
    """Test that m and N must be positive."""
    with pytest.raises(ValueError):
        AncillaService.hybrid_resources(1, 0, 10)
