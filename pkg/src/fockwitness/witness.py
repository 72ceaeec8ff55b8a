"""Correlation fidelities, pattern-class defect and separable-state bounds.

All quantities refer to a joint state with ``N`` photons at A and ``M - N``
at B. ``F_n`` is the probability of complementary input patterns, ``F_K``
the probability of opposite K-values (mod M) after local DFTs, and ``D_p``
the class-weighted mass on complementary pattern-class pairs. Separable
states satisfy ``F_n - D_p + F_K <= 1``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import NamedTuple

import numpy as np

from .entangle import phi_partition
from .fock import (DomainError, MixedEnsemble, PureState, ResourceError,
                   enumerate_basis, tensor, uniform_mixture)
from .linop import apply, dft_matrix, lift
from .patterns import complementary_class, k_value, pattern_classes

MAX_OPERATOR_DIM = 4096
# margin against rounding when a separable state sits exactly on a bound
DECISION_TOL = 1e-12


def _partition_of(state) -> tuple:
    if not state.is_joint:
        raise DomainError("witness quantities need a joint state")
    basis_a, basis_b = state.basis
    if basis_a.M != basis_b.M or basis_a.N + basis_b.N != basis_a.M:
        raise DomainError(
            f"state is not on an (N, M - N) partition: {basis_a!r}, {basis_b!r}")
    return basis_a.M, basis_a.N


@lru_cache(maxsize=None)
def _masks(M: int, N: int):
    """Weight matrices over the joint basis for C_n, C_p and C_K."""
    basis_a, basis_b = enumerate_basis(M, N), enumerate_basis(M, M - N)
    c_n = np.zeros((len(basis_a), len(basis_b)))
    c_p = np.zeros_like(c_n)
    for i, n in enumerate(basis_a):
        if max(n, default=0) <= 1:
            c_n[i, basis_b.index(tuple(1 - x for x in n))] = 1.0
    for cls in pattern_classes(M, N):
        comp = complementary_class(cls)
        if comp is None:
            continue
        rows = [basis_a.index(p) for p in cls.elements]
        cols = [basis_b.index(p) for p in comp.elements]
        c_p[np.ix_(rows, cols)] = 1.0 / cls.cardinality
    ka = np.array([k_value(p) for p in basis_a])
    kb = np.array([k_value(p) for p in basis_b])
    c_k = ((ka[:, None] + kb[None, :]) % M == 0).astype(float)
    for a in (c_n, c_p, c_k):
        a.setflags(write=False)
    return c_n, c_p, c_k


def input_distribution(state) -> np.ndarray:
    """Joint outcome probabilities in the input modes."""
    _partition_of(state)
    return state.probabilities()


def dft_distribution(state) -> np.ndarray:
    """Joint outcome probabilities after a DFT on both sides."""
    M, _ = _partition_of(state)
    return apply(dft_matrix(M), state, "both").probabilities()


def fidelity_input(state) -> float:
    M, N = _partition_of(state)
    return float(np.sum(_masks(M, N)[0] * input_distribution(state)))


def fidelity_dft(state) -> float:
    M, N = _partition_of(state)
    return float(np.sum(_masks(M, N)[2] * dft_distribution(state)))


def pattern_defect(state) -> float:
    M, N = _partition_of(state)
    return float(np.sum(_masks(M, N)[1] * input_distribution(state)))


def class_pair_probabilities(state) -> dict:
    """``P(p_A, p_B)`` keyed by the pair of class representatives."""
    M, N = _partition_of(state)
    basis_a, basis_b = state.basis
    probs = input_distribution(state)
    out = {}
    for ca in pattern_classes(M, N):
        rows = [basis_a.index(p) for p in ca.elements]
        for cb in pattern_classes(M, M - N):
            cols = [basis_b.index(p) for p in cb.elements]
            out[str(ca.representative), str(cb.representative)] = float(
                probs[np.ix_(rows, cols)].sum())
    return out


def _rational(x: float, max_den: int = 100000, tol: float = 1e-9) -> str | None:
    f = Fraction(x).limit_denominator(max_den)
    return str(f) if abs(float(f) - x) < tol else None


@dataclass(frozen=True)
class WitnessReport:
    F_n: float
    F_K: float
    D_p: float
    basic_bound: float
    optimized_lhs: float
    witness_value: float
    entangled_by_basic: bool
    entangled_by_optimized: bool

    def to_dict(self) -> dict:
        """Doubles plus ``<field>_exact`` rational strings where one fits."""
        out = asdict(self)
        for key, val in asdict(self).items():
            if isinstance(val, float):
                out[f"{key}_exact"] = _rational(val)
        return out


@lru_cache(maxsize=None)
def min_cardinality(M: int, N: int) -> int:
    return min(c.cardinality for c in pattern_classes(M, N))


def basic_bound(M: int, N: int) -> Fraction:
    """Largest ``F_n + F_K`` reachable by separable states: ``1 + 1/min d_p``."""
    if not 1 <= N <= M - 1:
        raise DomainError(f"need 1 <= N <= M - 1, got M={M}, N={N}")
    return 1 + Fraction(1, min_cardinality(M, N))


def evaluate(state) -> WitnessReport:
    M, N = _partition_of(state)
    c_n, c_p, c_k = _masks(M, N)
    p_in = input_distribution(state)
    p_dft = dft_distribution(state)
    f_n = float(np.sum(c_n * p_in))
    d_p = float(np.sum(c_p * p_in))
    f_k = float(np.sum(c_k * p_dft))
    bound = float(basic_bound(M, N)) if 1 <= N <= M - 1 else 2.0
    lhs = f_n - d_p + f_k
    return WitnessReport(
        F_n=f_n, F_K=f_k, D_p=d_p, basic_bound=bound,
        optimized_lhs=lhs, witness_value=lhs - 1,
        entangled_by_basic=f_n + f_k - bound > DECISION_TOL,
        entangled_by_optimized=lhs - 1 > DECISION_TOL,
    )


def correlation_operators(M: int, N: int) -> dict:
    """Dense ``C_n``, ``C_p`` and ``C_K`` on the joint space (row-major ``a * D_B + b``)."""
    da, db = len(enumerate_basis(M, N)), len(enumerate_basis(M, M - N))
    if da * db > MAX_OPERATOR_DIM:
        raise ResourceError(f"joint dimension {da * db} exceeds {MAX_OPERATOR_DIM}")
    c_n, c_p, c_k = _masks(M, N)
    f = dft_matrix(M)
    v = np.kron(lift(f, enumerate_basis(M, N)).matrix,
                lift(f, enumerate_basis(M, M - N)).matrix)
    return {
        "C_n": np.diag(c_n.ravel()).astype(complex),
        "C_p": np.diag(c_p.ravel()).astype(complex),
        "C_K": v.conj().T @ (c_k.ravel()[:, None] * v),
    }


def witness_operator(M: int, N: int) -> np.ndarray:
    """``W = C_n - C_p + C_K - 1``; positive expectation certifies entanglement."""
    ops = correlation_operators(M, N)
    w = ops["C_n"] - ops["C_p"] + ops["C_K"]
    w -= np.eye(len(w))
    return (w + w.conj().T) / 2


def expectation(operator: np.ndarray, state) -> float:
    """``tr(rho W)`` for a joint pure state or ensemble."""
    if isinstance(state, MixedEnsemble):
        return state.expectation(lambda s: expectation(operator, s))
    v = state.amplitudes
    return float(np.real(np.vdot(v, operator @ v)))


class MixtureLaw(NamedTuple):
    slope: float
    offset: float
    threshold: float

    def value(self, p: float) -> float:
        return self.slope * p + self.offset


def mixture_threshold(M: int, N: int, state=None) -> MixtureLaw:
    """Witness value of ``p |state><state| + (1 - p) * uniform`` as ``slope * p + offset``.

    ``state`` defaults to the ideal post-selected state.
    """
    if state is None:
        state = phi_partition(M, N)
    ideal = evaluate(state).witness_value
    noise = evaluate(uniform_mixture(enumerate_basis(M, N),
                                     enumerate_basis(M, M - N))).witness_value
    slope = ideal - noise
    threshold = -noise / slope if slope != 0 else float("nan")
    return MixtureLaw(slope, noise, threshold)


def ideal_defect(M: int, N: int) -> Fraction:
    """Exact ``D_p`` of the ideal state: every single-occupancy class contributes ``1/C(M, N)``."""
    n_classes = sum(1 for c in pattern_classes(M, N) if c.single_occupancy)
    return Fraction(n_classes, comb(M, N))


class FidelityThresholds(NamedTuple):
    basic: Fraction
    tight: Fraction

    def as_floats(self) -> tuple:
        return float(self.basic), float(self.tight)


def state_fidelity_thresholds(M: int, N: int) -> FidelityThresholds:
    """State fidelities above which the basic and the optimized criteria must fire.

    Worst case: errors contribute nothing to either fidelity, and under the
    optimized criterion they carry the largest complementary-class defect.
    """
    basic = basic_bound(M, N) / 2
    ideal_lhs = 2 - ideal_defect(M, N)
    worst = max(Fraction(1, c.cardinality) for c in pattern_classes(M, N)
                if c.single_occupancy)
    return FidelityThresholds(basic, (1 + worst) / (ideal_lhs + worst))


def random_pure_state(basis, rng: np.random.Generator) -> PureState:
    """Normalized complex-Gaussian amplitudes (Haar-distributed pure state).

    ``basis`` may be a single basis or a joint pair.
    """
    d = len(basis) if not isinstance(basis, tuple) else len(basis[0]) * len(basis[1])
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return PureState(basis, v / np.linalg.norm(v))


def random_product_state(M: int, N: int, rng: np.random.Generator) -> PureState:
    return tensor(random_pure_state(enumerate_basis(M, N), rng),
                  random_pure_state(enumerate_basis(M, M - N), rng))


def sample_separable_witness(M: int, N: int, samples: int = 1000,
                             seed: int = 0) -> np.ndarray:
    """Witness values of random product states, one child seed per sample."""
    children = np.random.SeedSequence(seed).spawn(samples)
    return np.array([
        evaluate(random_product_state(M, N, np.random.default_rng(s))).witness_value
        for s in children
    ])
