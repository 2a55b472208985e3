"""
Tests for the PauliService class.
"""
import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.errors import CapacityError, DimensionError
from src.models.PauliString import PauliString
from src.services.PauliService import PauliService


@st.composite
def pauli_pairs(draw):
    """Two random strings on the same qubit count."""
    n = draw(st.integers(min_value=1, max_value=4))
    text = st.text(alphabet='IXYZ', min_size=n, max_size=n)
    return PauliString.from_text(draw(text)), PauliString.from_text(draw(text))


@pytest.mark.parametrize('a,b,power,product', [
    ('X', 'Y', 1, 'Z'),
    ('Y', 'X', 3, 'Z'),
    ('Z', 'X', 1, 'Y'),
    ('X', 'Z', 3, 'Y'),
    ('Y', 'Y', 0, 'I'),
    ('XX', 'ZZ', 2, 'YY'),
])
def test_multiply_known_products(a, b, power, product):
    """Test single-qubit and two-qubit products with their phases."""
    result = PauliService.multiply(PauliString.from_text(a), PauliString.from_text(b))

    assert result.power == power
    assert result.pauli.to_text() == product


def test_multiply_size_mismatch():
    """Test that strings on different qubit counts cannot be multiplied."""
    with pytest.raises(DimensionError):
        PauliService.multiply(PauliString.from_text('X'), PauliString.from_text('XX'))


@given(pauli_pairs())
def test_multiply_matches_matrices(pair):
    """Test that the exact product agrees with dense matrix multiplication."""
    a, b = pair
    result = PauliService.multiply(a, b)

    np.testing.assert_allclose(
        result.phase * result.pauli.to_matrix(),
        a.to_matrix() @ b.to_matrix(),
        atol=1e-12
    )


@given(pauli_pairs())
def test_commutes_matches_matrices(pair):
    """Test the commutation test against the matrix commutator."""
    a, b = pair
    ma, mb = a.to_matrix(), b.to_matrix()
    commute = np.allclose(ma @ mb, mb @ ma)

    assert PauliService.commutes(a, b) == commute
    assert PauliService.conjugate_sign(a, b) == (1 if commute else -1)


@given(pauli_pairs(), st.data())
def test_apply_to_basis_matches_matrix(pair, data):
    """Test the basis action against the dense matrix column."""
    p, _ = pair
    bits = data.draw(st.lists(st.integers(0, 1), min_size=p.n, max_size=p.n))
    new_bits, power = PauliService.apply_to_basis(p, bits)

    index = sum(b << j for j, b in enumerate(bits))
    new_index = sum(b << j for j, b in enumerate(new_bits))
    column = p.to_matrix()[:, index]
    assert column[new_index] == pytest.approx((1, 1j, -1, -1j)[power])
    assert np.count_nonzero(np.abs(column) > 1e-12) == 1


def test_apply_to_basis_validation():
    """Test bit length and bit value checks."""
    with pytest.raises(DimensionError):
        PauliService.apply_to_basis(PauliString.from_text('XX'), [0])
    with pytest.raises(ValueError, match="expected 0 or 1"):
        PauliService.apply_to_basis(PauliString.from_text('X'), [2])


def test_sample_nonidentity_uniform(rng):
    """Test that samples avoid the identity and cover all 15 two-qubit strings."""
    draws = [PauliService.sample_nonidentity_uniform(2, rng) for _ in range(3000)]
    counts = {}
    for p in draws:
        counts[p.to_text()] = counts.get(p.to_text(), 0) + 1

    assert 'II' not in counts
    assert len(counts) == 15
    # each string expects 200 draws; sd about 13.7
    assert all(abs(c - 200) < 4 * 13.7 for c in counts.values())


def test_sample_nonidentity_uniform_capacity(rng):
    """Test the qubit-count limits of uniform sampling."""
    with pytest.raises(CapacityError):
        PauliService.sample_nonidentity_uniform(32, rng)
    with pytest.raises(CapacityError):
        PauliService.sample_nonidentity_uniform(0, rng)
