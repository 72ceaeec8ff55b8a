"""Fock-space foundations: photon patterns, basis enumeration, states and mixtures."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


class ResourceError(RuntimeError):
    """Raised when a request would exceed the supported problem size."""


class PhotonPattern(tuple):
    """Occupation numbers of ``M`` modes, e.g. ``PhotonPattern((1, 1, 0, 0))``.

    A tuple subclass, so patterns hash and compare like plain tuples.
    """

    def __new__(cls, occupations):
        occ = tuple(int(n) for n in occupations)
        if len(occ) < 1:
            raise DomainError("a pattern needs at least one mode")
        if any(n < 0 for n in occ):
            raise DomainError(f"negative occupation in {occ}")
        return super().__new__(cls, occ)

    @property
    def M(self) -> int:
        return len(self)

    @property
    def N(self) -> int:
        return sum(self)

    @classmethod
    def parse(cls, text: str) -> PhotonPattern:
        """Read ``"1100"`` or ``"10,0,2,0"``."""
        text = text.strip()
        try:
            if "," in text:
                return cls(int(t) for t in text.split(","))
            if not text.isdigit():
                raise ValueError(text)
            return cls(int(c) for c in text)
        except ValueError as exc:
            raise DomainError(f"cannot parse pattern {text!r}") from exc

    def __str__(self) -> str:
        if max(self) <= 9:
            return "".join(str(n) for n in self)
        return ",".join(str(n) for n in self)

    def __repr__(self) -> str:
        return f"PhotonPattern({str(self)!r})"


def _descending_patterns(M: int, N: int):
    if M == 1:
        yield (N,)
        return
    for first in range(N, -1, -1):
        for rest in _descending_patterns(M - 1, N - first):
            yield (first,) + rest


@dataclass(frozen=True, eq=False)
class FockBasis:
    """All patterns of ``N`` photons in ``M`` modes, descending lexicographic order."""

    M: int
    N: int
    patterns: tuple
    index_of: dict

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)

    def __eq__(self, other) -> bool:
        return isinstance(other, FockBasis) and (self.M, self.N) == (other.M, other.N)

    def __hash__(self) -> int:
        return hash((FockBasis, self.M, self.N))

    def __repr__(self) -> str:
        return f"FockBasis(M={self.M}, N={self.N}, size={len(self)})"

    def index(self, pattern) -> int:
        """Position of ``pattern`` (a sequence or its text form)."""
        if isinstance(pattern, str):
            pattern = PhotonPattern.parse(pattern)
        try:
            return self.index_of[tuple(pattern)]
        except KeyError:
            raise DomainError(f"{pattern} is not in {self!r}") from None

    def occupations(self) -> np.ndarray:
        """Patterns as an integer array of shape ``(len(self), M)``."""
        return np.array(self.patterns, dtype=int).reshape(len(self), self.M)


@lru_cache(maxsize=None)
def enumerate_basis(M: int, N: int) -> FockBasis:
    if M < 1 or N < 0:
        raise DomainError(f"need M >= 1 and N >= 0, got M={M}, N={N}")
    patterns = tuple(PhotonPattern(p) for p in _descending_patterns(M, N))
    assert len(patterns) == comb(M + N - 1, N)
    return FockBasis(M, N, patterns, {p: i for i, p in enumerate(patterns)})


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


class PureState:
    """Amplitude vector over a single basis or a joint pair ``(basis_a, basis_b)``.

    Joint amplitudes are stored as a ``(len(basis_a), len(basis_b))`` matrix;
    :attr:`amplitudes` always returns the flat row-major vector.
    """

    def __init__(self, basis, amplitudes):
        if isinstance(basis, FockBasis):
            shape = (len(basis),)
        else:
            basis = tuple(basis)
            if len(basis) != 2 or not all(isinstance(b, FockBasis) for b in basis):
                raise DomainError("basis must be a FockBasis or a pair of them")
            shape = (len(basis[0]), len(basis[1]))
        amps = np.asarray(amplitudes, dtype=complex)
        if amps.size != int(np.prod(shape)):
            raise DomainError(f"{amps.size} amplitudes for basis of shape {shape}")
        self.basis = basis
        self._amps = _frozen(amps.reshape(shape))

    @property
    def is_joint(self) -> bool:
        return isinstance(self.basis, tuple)

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amps.reshape(-1)

    @property
    def matrix(self) -> np.ndarray:
        """Joint amplitudes as a matrix (rows: A patterns, columns: B patterns)."""
        if not self.is_joint:
            raise DomainError("matrix form exists only for joint states")
        return self._amps

    def norm(self) -> float:
        return float(np.linalg.norm(self._amps))

    def normalize(self) -> PureState:
        nrm = self.norm()
        if nrm == 0:
            raise DomainError("cannot normalize the zero vector")
        return PureState(self.basis, self._amps / nrm)

    def probabilities(self) -> np.ndarray:
        """``|amplitude|**2`` in the basis shape (matrix for joint states)."""
        return np.abs(self._amps) ** 2

    def amplitude(self, *patterns) -> complex:
        if self.is_joint:
            a, b = patterns
            return complex(self._amps[self.basis[0].index(a), self.basis[1].index(b)])
        (p,) = patterns
        return complex(self._amps[self.basis.index(p)])

    def __repr__(self) -> str:
        return f"PureState({self.basis!r})"


def basis_state(basis: FockBasis, pattern) -> PureState:
    amps = np.zeros(len(basis), dtype=complex)
    amps[basis.index(pattern)] = 1.0
    return PureState(basis, amps)


def pattern_state(pattern) -> PureState:
    """``|n>`` in the basis of its own mode and photon number."""
    p = PhotonPattern(pattern) if not isinstance(pattern, PhotonPattern) else pattern
    return basis_state(enumerate_basis(p.M, p.N), p)


def tensor(state_a: PureState, state_b: PureState) -> PureState:
    """Product state over the joint basis ``(state_a.basis, state_b.basis)``."""
    if state_a.is_joint or state_b.is_joint:
        raise DomainError("tensor expects two local states")
    return PureState((state_a.basis, state_b.basis),
                     np.outer(state_a.amplitudes, state_b.amplitudes))


class MixedEnsemble:
    """Convex mixture of pure states sharing one basis."""

    def __init__(self, components):
        self.components = tuple((float(w), s) for w, s in components)

    @property
    def basis(self):
        return self.components[0][1].basis

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.components])

    @property
    def is_joint(self) -> bool:
        return self.components[0][1].is_joint

    def probabilities(self) -> np.ndarray:
        return sum(w * s.probabilities() for w, s in self.components)

    def expectation(self, fn) -> float:
        """Weighted sum of ``fn(state)`` over the components."""
        return float(sum(w * fn(s) for w, s in self.components))

    def density_matrix(self) -> np.ndarray:
        dim = self.components[0][1].amplitudes.size
        rho = np.zeros((dim, dim), dtype=complex)
        for w, s in self.components:
            v = s.amplitudes
            rho += w * np.outer(v, v.conj())
        return rho

    def __len__(self) -> int:
        return len(self.components)

    def __repr__(self) -> str:
        return f"MixedEnsemble({len(self)} components over {self.basis!r})"


def mix(components) -> MixedEnsemble:
    """Mixture of ``(weight, state)`` pairs; weights are renormalized to sum to one.

    Nested ensembles are flattened.
    """
    flat = []
    for w, s in components:
        if w < 0:
            raise DomainError(f"negative weight {w}")
        if isinstance(s, MixedEnsemble):
            flat.extend((w * v, t) for v, t in s.components)
        else:
            flat.append((w, s))
    if not flat:
        raise DomainError("cannot mix an empty list of states")
    total = sum(w for w, _ in flat)
    if total <= 0:
        raise DomainError("weights sum to zero")
    basis = flat[0][1].basis
    for _, s in flat:
        if s.basis != basis:
            raise DomainError("all mixed states must share one basis")
    return MixedEnsemble([(w / total, s) for w, s in flat])


def uniform_mixture(basis_a: FockBasis, basis_b: FockBasis | None = None) -> MixedEnsemble:
    """The maximally mixed state, as an equal-weight ensemble of basis states."""
    if basis_b is None:
        states = [basis_state(basis_a, p) for p in basis_a]
    else:
        da, db = len(basis_a), len(basis_b)
        states = []
        for k in range(da * db):
            amps = np.zeros(da * db, dtype=complex)
            amps[k] = 1.0
            states.append(PureState((basis_a, basis_b), amps))
    return mix([(1.0, s) for s in states])


def probability_table(state) -> np.ndarray:
    """Outcome distribution of a pure state or ensemble in its own basis."""
    return state.probabilities()


def joint_probability(state, pattern_a, pattern_b) -> float:
    """``P(n_A, n_B)`` for a joint pure state or ensemble."""
    if not state.is_joint:
        raise DomainError("joint_probability needs a joint state")
    basis_a, basis_b = state.basis
    i, j = basis_a.index(pattern_a), basis_b.index(pattern_b)
    if isinstance(state, MixedEnsemble):
        return float(sum(w * abs(s.matrix[i, j]) ** 2 for w, s in state.components))
    return float(abs(state.matrix[i, j]) ** 2)
