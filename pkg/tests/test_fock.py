from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fockwitness import (DomainError, MixedEnsemble, PhotonPattern, PureState, basis_state,
                         enumerate_basis, joint_probability, mix, pattern_state, tensor)


def test_two_modes_one_photon():
    assert enumerate_basis(2, 1).patterns == ((1, 0), (0, 1))


def test_four_modes_two_photons_order():
    b = enumerate_basis(4, 2)
    assert [str(p) for p in b] == ["2000", "1100", "1010", "1001", "0200",
                                   "0110", "0101", "0020", "0011", "0002"]


def test_vacuum_is_one_dimensional():
    assert enumerate_basis(4, 0).patterns == ((0, 0, 0, 0),)


@pytest.mark.parametrize("M", range(1, 9))
@pytest.mark.parametrize("N", range(0, 7))
def test_basis_size(M, N):
    b = enumerate_basis(M, N)
    assert len(b) == comb(M + N - 1, N)
    assert all(x > y for x, y in zip(b.patterns, b.patterns[1:]))
    assert all(p.N == N and p.M == M for p in b)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 4))
def test_index_round_trip(M, N):
    b = enumerate_basis(M, N)
    assert all(b.index(p) == i for i, p in enumerate(b.patterns))


@pytest.mark.parametrize("bad", [(0, 0), (3, -1)])
def test_enumerate_rejects_bad_sizes(bad):
    with pytest.raises(DomainError):
        enumerate_basis(*bad)


def test_pattern_text_forms():
    assert str(PhotonPattern("1100")) == "1100"
    assert PhotonPattern.parse("10,0,2,0") == (10, 0, 2, 0)
    assert str(PhotonPattern((10, 0, 2, 0))) == "10,0,2,0"
    assert PhotonPattern.parse(" 0110 ") == (0, 1, 1, 0)
    with pytest.raises(DomainError):
        PhotonPattern.parse("1a0")
    with pytest.raises(DomainError):
        PhotonPattern((1, -1))


def test_joint_probability_examples(phi22, white_noise_42):
    assert joint_probability(phi22, "1100", "0011") == pytest.approx(1 / 6, abs=1e-12)
    assert joint_probability(phi22, "2000", "0011") == 0
    assert joint_probability(white_noise_42, "0200", "1001") == pytest.approx(0.01, abs=1e-12)
    with pytest.raises(DomainError):
        joint_probability(phi22, "1110", "0001")


def _random_joint(rng, M, na, nb):
    ba, bb = enumerate_basis(M, na), enumerate_basis(M, nb)
    v = rng.normal(size=len(ba) * len(bb)) + 1j * rng.normal(size=len(ba) * len(bb))
    return PureState((ba, bb), v).normalize()


def test_probability_completeness(rng):
    for M, na, nb in [(2, 1, 1), (3, 2, 1), (4, 2, 2), (5, 1, 3)]:
        s = _random_joint(rng, M, na, nb)
        assert s.norm() == pytest.approx(1, abs=1e-12)
        total = sum(joint_probability(s, a, b) for a in s.basis[0] for b in s.basis[1])
        assert total == pytest.approx(1, abs=1e-10)


def test_tensor_product():
    s = tensor(pattern_state("1100"), pattern_state("0011"))
    assert s.is_joint and s.matrix.shape == (10, 10)
    assert s.amplitude("1100", "0011") == 1
    vac = tensor(pattern_state("0000"), pattern_state("0000"))
    assert vac.amplitudes.tolist() == [1]


def test_tensor_norm_multiplicative(rng):
    b = enumerate_basis(3, 2)
    for _ in range(5):
        x = PureState(b, rng.normal(size=6) + 1j * rng.normal(size=6)).normalize()
        y = PureState(b, rng.normal(size=6)).normalize()
        assert tensor(x, y).norm() == pytest.approx(1, abs=1e-12)


def test_mix_renormalizes_and_averages(phi22, product_1100_0011):
    m = mix([(2.0, phi22), (6.0, product_1100_0011)])
    assert isinstance(m, MixedEnsemble)
    assert m.weights.sum() == pytest.approx(1, abs=1e-12)
    expected = 0.25 * phi22.probabilities() + 0.75 * product_1100_0011.probabilities()
    assert np.allclose(m.probabilities(), expected, atol=1e-12)


def test_mix_single_and_idempotent(phi22):
    assert np.allclose(mix([(1.0, phi22)]).probabilities(), phi22.probabilities())
    assert np.allclose(mix([(0.5, phi22), (0.5, phi22)]).probabilities(),
                       phi22.probabilities())


def test_mix_errors(phi22):
    with pytest.raises(DomainError):
        mix([])
    with pytest.raises(DomainError):
        mix([(-0.1, phi22)])
    with pytest.raises(DomainError):
        mix([(0.5, phi22), (0.5, basis_state(enumerate_basis(4, 2), "1100"))])


def test_states_are_immutable(phi22):
    with pytest.raises(ValueError):
        phi22.amplitudes[0] = 1


def test_density_matrix_trace(white_noise_42):
    rho = white_noise_42.density_matrix()
    assert np.allclose(rho, np.eye(100) / 100)
