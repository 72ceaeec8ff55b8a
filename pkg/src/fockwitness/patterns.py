"""Cyclic pattern classes, K-values and mode-shift eigenstates."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import DomainError, PhotonPattern, PureState, enumerate_basis
from .linop import dft_matrix, lift, shift_pattern


def k_value(pattern) -> int:
    """Total mode index ``sum_k k * n_k`` modulo the number of modes."""
    n = np.asarray(pattern, dtype=int)
    return int(np.dot(np.arange(len(n)), n) % len(n))


@dataclass(frozen=True)
class PatternClass:
    """Orbit of a pattern under cyclic mode shifts.

    ``elements[j]`` is the representative shifted ``j`` times; the
    representative is the lexicographically greatest element.
    """

    representative: PhotonPattern
    elements: tuple
    cardinality: int
    allowed_K: tuple

    @property
    def M(self) -> int:
        return self.representative.M

    @property
    def N(self) -> int:
        return self.representative.N

    def __contains__(self, pattern) -> bool:
        return tuple(pattern) in self.elements

    def __str__(self) -> str:
        return f"E_{self.representative}"

    def shift_of(self, pattern) -> int:
        """Number of shifts taking the representative to ``pattern``."""
        try:
            return self.elements.index(tuple(pattern))
        except ValueError:
            raise DomainError(f"{pattern} is not in class {self}") from None

    @property
    def single_occupancy(self) -> bool:
        return max(self.representative) <= 1


@lru_cache(maxsize=None)
def _class_of(pattern: tuple) -> PatternClass:
    M = len(pattern)
    orbit = [PhotonPattern(pattern)]
    while True:
        nxt = shift_pattern(orbit[-1])
        if nxt == orbit[0]:
            break
        orbit.append(nxt)
    d = len(orbit)
    rep = max(orbit)
    start = orbit.index(rep)
    elements = tuple(orbit[start:] + orbit[:start])
    allowed = tuple(range(0, M, M // d))
    return PatternClass(rep, elements, d, allowed)


def pattern_class(pattern) -> PatternClass:
    return _class_of(tuple(PhotonPattern(pattern)))


@lru_cache(maxsize=None)
def pattern_classes(M: int, N: int) -> tuple:
    """All classes of ``N`` photons in ``M`` modes, ordered by representative
    in basis order (descending)."""
    seen, classes = set(), []
    for p in enumerate_basis(M, N):
        if p in seen:
            continue
        c = pattern_class(p)
        seen.update(c.elements)
        classes.append(c)
    return tuple(classes)


def complementary_class(cls: PatternClass) -> PatternClass | None:
    """Class of ``(1, ..., 1) - p``, or ``None`` when some mode holds two or more photons."""
    if not cls.single_occupancy:
        return None
    return pattern_class(tuple(1 - n for n in cls.representative))


def class_eigenstate(cls: PatternClass, K: int, anchor=None) -> PureState:
    """Eigenstate of the mode shift with eigenvalue ``exp(2 pi i K / M)``.

    Phases are counted from ``anchor`` (default: the representative), so
    anchoring at another element changes the state by a global phase.
    """
    M, d = cls.M, cls.cardinality
    K %= M
    if K not in cls.allowed_K:
        raise DomainError(
            f"K={K} is not allowed in {cls}: K must be a multiple of M/d = {M // d}")
    anchor = cls.representative if anchor is None else PhotonPattern(anchor)
    basis = enumerate_basis(M, cls.N)
    amps = np.zeros(len(basis), dtype=complex)
    for dm in range(d):
        amps[basis.index(shift_pattern(anchor, dm))] += np.exp(-2j * np.pi * K * dm / M)
    return PureState(basis, amps / np.sqrt(d))


def inverse_dft_image(pattern) -> PureState:
    """``U_F^dagger |n>`` in the input photon-number basis."""
    p = PhotonPattern(pattern)
    basis = enumerate_basis(p.M, p.N)
    row = lift(dft_matrix(p.M), basis).matrix[basis.index(p)]
    return PureState(basis, row.conj())


def decompose_dft_output(pattern) -> list:
    """Expand ``U_F^dagger |n>`` over class eigenstates ``|E_p, K(n)>``.

    Returns ``(class, K, coefficient)`` for every class of ``|n|`` photons
    that admits ``K(n)``.
    """
    p = PhotonPattern(pattern)
    K = k_value(p)
    image = inverse_dft_image(p).amplitudes
    terms = []
    for cls in pattern_classes(p.M, p.N):
        if K in cls.allowed_K:
            coeff = np.vdot(class_eigenstate(cls, K).amplitudes, image)
            terms.append((cls, K, complex(coeff)))
    return terms


def k_blocks(M: int, N: int) -> dict:
    """Basis patterns grouped by K-value (basis order inside each block)."""
    blocks = {K: [] for K in range(M)}
    for p in enumerate_basis(M, N):
        blocks[k_value(p)].append(p)
    return blocks


def class_display_order(M: int, N: int) -> list:
    """Patterns grouped by class, each class listed by shift count."""
    return [p for c in pattern_classes(M, N) for p in c.elements]
