"""Entangled states from beam-splitting single photons, and their partitions."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb, exp, pi, sqrt

import numpy as np

from .fock import DomainError, PureState, ResourceError, enumerate_basis

MAX_GENERATE_M = 12
SCHMIDT_TOL = 1e-10


class StratifiedState:
    """Joint state with variable local photon numbers.

    ``blocks`` maps ``(N_A, N_B)`` to an (unnormalized) joint
    :class:`PureState` on that stratum. Coherences across strata are kept
    implicitly: the full state is the direct sum of the blocks.
    """

    def __init__(self, M: int, blocks: dict):
        self.M = M
        self.blocks = dict(sorted(blocks.items()))

    def norm(self) -> float:
        return float(np.sqrt(sum(b.norm() ** 2 for b in self.blocks.values())))

    def partition_probabilities(self) -> dict:
        return {key: b.norm() ** 2 for key, b in self.blocks.items()}

    def project(self, N_A: int) -> PureState:
        """Post-select ``N_A`` photons at A and renormalize."""
        for (na, nb), block in self.blocks.items():
            if na == N_A:
                return block.normalize()
        raise DomainError(f"no stratum with {N_A} photons at A")

    def map_blocks(self, fn) -> StratifiedState:
        return StratifiedState(self.M, {k: fn(b) for k, b in self.blocks.items()})

    def amplitude_matrix(self) -> np.ndarray:
        """Dense amplitude matrix over the direct sum of all local bases."""
        rows = sorted({na for na, _ in self.blocks})
        cols = sorted({nb for _, nb in self.blocks})
        row_off, col_off, r, c = {}, {}, 0, 0
        for na in rows:
            row_off[na], r = r, r + len(enumerate_basis(self.M, na))
        for nb in cols:
            col_off[nb], c = c, c + len(enumerate_basis(self.M, nb))
        out = np.zeros((r, c), dtype=complex)
        for (na, nb), block in self.blocks.items():
            da, db = block.matrix.shape
            out[row_off[na]:row_off[na] + da, col_off[nb]:col_off[nb] + db] = block.matrix
        return out

    def __repr__(self) -> str:
        return f"StratifiedState(M={self.M}, strata={list(self.blocks)})"


def _complementary_pairs(M: int, N: int):
    """``(n, 1 - n)`` for every single-occupancy pattern of ``N`` photons."""
    for modes in combinations(range(M), N):
        n = [0] * M
        for m in modes:
            n[m] = 1
        yield tuple(n), tuple(1 - x for x in n)


def _partition_block(M: int, N: int, amplitude: float) -> PureState:
    basis_a, basis_b = enumerate_basis(M, N), enumerate_basis(M, M - N)
    amps = np.zeros((len(basis_a), len(basis_b)), dtype=complex)
    for n, nbar in _complementary_pairs(M, N):
        amps[basis_a.index(n), basis_b.index(nbar)] = amplitude
    return PureState((basis_a, basis_b), amps)


def generate_psi(M: int) -> StratifiedState:
    """``M`` single photons, each split 50/50 between systems A and B."""
    if not 1 <= M <= MAX_GENERATE_M:
        raise ResourceError(f"M must be in 1..{MAX_GENERATE_M}, got {M}")
    amp = 2.0 ** (-M / 2)
    return StratifiedState(M, {(N, M - N): _partition_block(M, N, amp)
                               for N in range(M + 1)})


def _check_partition(M: int, N: int):
    if M < 1 or not 0 <= N <= M:
        raise DomainError(f"need 0 <= N <= M, got M={M}, N={N}")


def partition_probability(M: int, N: int, exact: bool = False):
    """Probability of finding ``N`` of the ``M`` photons at A: ``C(M, N) / 2**M``."""
    _check_partition(M, N)
    p = Fraction(comb(M, N), 2 ** M)
    return p if exact else float(p)


def gaussian_partition_estimate(M: int, N: float) -> float:
    if M < 1:
        raise DomainError("M must be positive")
    return sqrt(2 / (pi * M)) * exp(-2 * (N - M / 2) ** 2 / M)


def phi_partition(M: int, N: int) -> PureState:
    """Normalized post-selected state with ``N`` photons at A and ``M - N`` at B."""
    _check_partition(M, N)
    return _partition_block(M, N, 1 / sqrt(comb(M, N)))


def schmidt_rank(state, tol: float = SCHMIDT_TOL) -> int:
    if isinstance(state, StratifiedState):
        x = state.amplitude_matrix()
    else:
        x = state.matrix
    if x.size == 0:
        return 0
    return int(np.sum(np.linalg.svd(x, compute_uv=False) > tol))
