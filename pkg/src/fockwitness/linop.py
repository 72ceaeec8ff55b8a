"""Mode unitaries and their action on N-photon Fock spaces.

Convention: a single photon in mode ``m`` goes to ``sum_k T[k, m] |k>``.
Multi-photon amplitudes follow from permanents of row/column-repeated
submatrices of ``T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from .fock import DomainError, FockBasis, MixedEnsemble, PhotonPattern, PureState, mix

UNITARY_ATOL = 1e-10
# columns of the lifted matrix are computed on demand above this size
DENSE_LIFT_MAX = 512


@dataclass(frozen=True, eq=False)
class ModeUnitary:
    """``M x M`` unitary acting on single-photon mode amplitudes."""

    entries: np.ndarray

    def __post_init__(self):
        t = np.array(self.entries, dtype=complex)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise DomainError(f"mode unitary must be square, got shape {t.shape}")
        if not np.allclose(t.conj().T @ t, np.eye(len(t)), rtol=0, atol=UNITARY_ATOL):
            raise DomainError("matrix is not unitary")
        t.setflags(write=False)
        object.__setattr__(self, "entries", t)

    @property
    def M(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other: ModeUnitary) -> ModeUnitary:
        return ModeUnitary(self.entries @ other.entries)

    def dagger(self) -> ModeUnitary:
        return ModeUnitary(self.entries.conj().T)

    def __pow__(self, k: int) -> ModeUnitary:
        if k < 0:
            return self.dagger() ** (-k)
        return ModeUnitary(np.linalg.matrix_power(self.entries, k))


@dataclass(frozen=True, eq=False)
class FockUnitary:
    """Lift of a :class:`ModeUnitary` to ``basis``; rows and columns follow basis order."""

    basis: FockBasis
    matrix: np.ndarray

    @property
    def entries(self) -> np.ndarray:
        return self.matrix


def dft_matrix(M: int) -> ModeUnitary:
    """``T[k, m] = exp(2 pi i k m / M) / sqrt(M)``."""
    if M < 1:
        raise DomainError("M must be positive")
    k = np.arange(M)
    return ModeUnitary(np.exp(2j * np.pi * np.outer(k, k) / M) / np.sqrt(M))


def mode_shift_matrix(M: int) -> ModeUnitary:
    """Cyclic shift sending mode ``m`` to mode ``m + 1 (mod M)``."""
    if M < 1:
        raise DomainError("M must be positive")
    return ModeUnitary(np.roll(np.eye(M), 1, axis=0))


def beam_splitter_matrix(M: int, mode_a: int, mode_b: int,
                         theta: float = np.pi / 4, phi: float = 0.0) -> ModeUnitary:
    """Two-mode splitter on ``(mode_a, mode_b)``; ``theta = pi/4`` is 50/50.

    A photon entering ``mode_a`` leaves as ``cos(theta)|a> + exp(i phi) sin(theta)|b>``.
    """
    if mode_a == mode_b or not (0 <= mode_a < M and 0 <= mode_b < M):
        raise DomainError("beam splitter needs two distinct valid modes")
    t = np.eye(M, dtype=complex)
    c, s = np.cos(theta), np.sin(theta)
    t[mode_a, mode_a] = c
    t[mode_b, mode_a] = np.exp(1j * phi) * s
    t[mode_a, mode_b] = -np.exp(-1j * phi) * s
    t[mode_b, mode_b] = c
    return ModeUnitary(t)


def identity_matrix(M: int) -> ModeUnitary:
    return ModeUnitary(np.eye(M))


# ---------------------------------------------------------------- permanents

@lru_cache(maxsize=32)
def _gray_steps(n: int):
    """Column index and sign (+1 add, -1 remove) for Gray-code steps 1 .. 2**n - 1."""
    k = np.arange(1, 2 ** n, dtype=np.int64)
    lowbit = k & -k
    cols = np.log2(lowbit).round().astype(np.int64)
    gray = k ^ (k >> 1)
    signs = np.where((gray >> cols) & 1, 1.0, -1.0)
    # popcount(gray_k) has the parity of k
    parity = np.where(k & 1, -1.0, 1.0)
    for a in (cols, signs, parity):
        a.setflags(write=False)
    return cols, signs, parity


_CHUNK = 1 << 16


def _permanents(stack: np.ndarray) -> np.ndarray:
    """Permanents of a stack of ``n x n`` matrices, shape ``(B, n, n)``.

    Ryser's formula with Gray-code ordered subsets: each step adds or
    removes one column from the running row sums, so the total cost is
    ``O(2**n * n)`` per matrix. Summation order is fixed, so results are
    reproducible bit for bit.
    """
    stack = np.asarray(stack, dtype=complex)
    B, n = stack.shape[0], stack.shape[-1]
    if n == 0:
        return np.ones(B, dtype=complex)
    if n == 1:
        return stack[:, 0, 0].copy()
    cols, signs, parity = _gray_steps(n)
    steps = len(cols)
    out = np.empty(B, dtype=complex)
    per_batch = max(1, _CHUNK // (n * steps))
    step_chunk = min(steps, max(1, _CHUNK // n))
    for b0 in range(0, B, per_batch):
        a = stack[b0:b0 + per_batch]                   # (b, n, n)
        row_sums = np.zeros((a.shape[0], n), dtype=complex)
        total = np.zeros(a.shape[0], dtype=complex)
        for s0 in range(0, steps, step_chunk):
            c = cols[s0:s0 + step_chunk]
            deltas = a[:, :, c] * signs[s0:s0 + step_chunk]  # (b, n, s)
            sums = np.cumsum(deltas, axis=2) + row_sums[:, :, None]
            total += np.prod(sums, axis=1) @ parity[s0:s0 + step_chunk]
            row_sums = sums[:, :, -1]
        out[b0:b0 + per_batch] = total
    return out * (-1) ** n


def permanent(a) -> complex:
    """Permanent of a square matrix; the empty matrix has permanent 1."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"permanent needs a square matrix, got shape {a.shape}")
    return complex(_permanents(a[None])[0])


# ----------------------------------------------------------- Fock-space lift

def _mode_list(pattern) -> np.ndarray:
    return np.repeat(np.arange(len(pattern)), pattern)


def _factorial_norm(pattern) -> float:
    return float(np.prod([factorial(n) for n in pattern]))


def fock_amplitude(U: ModeUnitary, out, inp) -> complex:
    """``<out| U |in>`` for photon patterns ``out`` and ``inp``."""
    out, inp = tuple(out), tuple(inp)
    if len(out) != U.M or len(inp) != U.M:
        raise DomainError("pattern length does not match the number of modes")
    if sum(out) != sum(inp):
        return 0j
    sub = U.entries[np.ix_(_mode_list(out), _mode_list(inp))]
    return permanent(sub) / np.sqrt(_factorial_norm(out) * _factorial_norm(inp))


def _lift_columns(U: ModeUnitary, basis: FockBasis, columns) -> np.ndarray:
    """Columns ``columns`` of the lifted matrix, shape ``(len(basis), len(columns))``."""
    columns = np.asarray(columns, dtype=int)
    D, N = len(basis), basis.N
    rows_idx = np.array([_mode_list(p) for p in basis.patterns], dtype=int).reshape(D, N)
    norms = np.sqrt([_factorial_norm(p) for p in basis.patterns])
    t = U.entries
    out = np.empty((D, len(columns)), dtype=complex)
    step = max(1, (1 << 20) // max(1, D * N * N))
    for c0 in range(0, len(columns), step):
        cols_idx = rows_idx[columns[c0:c0 + step]]
        # stack[r, c] = T[rows_idx[r]][:, cols_idx[c]]
        stack = t[rows_idx[:, None, :, None], cols_idx[None, :, None, :]]
        n_cols = len(cols_idx)
        perms = _permanents(stack.reshape(D * n_cols, N, N))
        out[:, c0:c0 + step] = perms.reshape(D, n_cols)
    return out / np.outer(norms, norms[columns])


_LIFT_CACHE: dict = {}


def lift(U: ModeUnitary, basis: FockBasis) -> FockUnitary:
    """Dense matrix of ``U`` on the ``basis.N``-photon space (cached)."""
    if basis.M != U.M:
        raise DomainError(f"unitary on {U.M} modes cannot act on {basis!r}")
    key = (U.entries.tobytes(), basis.M, basis.N)
    hit = _LIFT_CACHE.get(key)
    if hit is None:
        m = _lift_columns(U, basis, np.arange(len(basis)))
        m.setflags(write=False)
        hit = _LIFT_CACHE.setdefault(key, FockUnitary(basis, m))
    return hit


def _apply_matrix(U: ModeUnitary, basis: FockBasis, amps: np.ndarray) -> np.ndarray:
    """``L @ amps`` where ``L`` is the lift of ``U``; ``amps`` has shape ``(D, k)``."""
    support = np.flatnonzero(np.any(amps != 0, axis=1))
    # sparse inputs only need a few columns unless the full lift is cached
    cached = (U.entries.tobytes(), basis.M, basis.N) in _LIFT_CACHE
    if len(basis) <= DENSE_LIFT_MAX and (cached or 4 * len(support) >= len(basis)):
        return lift(U, basis).matrix @ amps
    return _lift_columns(U, basis, support) @ amps[support]


def apply(U: ModeUnitary, state, side: str | None = None):
    """Apply ``U`` to a local state, or to subsystem ``"A"``, ``"B"`` or ``"both"``
    of a joint state. ``side=None`` means the whole state.

    Ensembles and stratified states are mapped component by component.
    """
    if isinstance(state, MixedEnsemble):
        return mix([(w, apply(U, s, side)) for w, s in state.components])
    if hasattr(state, "map_blocks"):
        return state.map_blocks(lambda s: apply(U, s, side))
    if not state.is_joint:
        if side not in (None, "A"):
            raise DomainError(f"side={side!r} needs a joint state")
        out = _apply_matrix(U, state.basis, state.amplitudes[:, None])[:, 0]
        return PureState(state.basis, out)
    side = "both" if side is None else side
    if side not in ("A", "B", "both"):
        raise DomainError(f"unknown side {side!r}")
    basis_a, basis_b = state.basis
    x = np.array(state.matrix)
    if side in ("A", "both"):
        x = _apply_matrix(U, basis_a, x)
    if side in ("B", "both"):
        x = _apply_matrix(U, basis_b, x.T).T
    return PureState(state.basis, x)


def apply_local(U_a: ModeUnitary, U_b: ModeUnitary, state):
    """``(U_a (x) U_b) |state>`` for joint states with different local unitaries."""
    return apply(U_b, apply(U_a, state, "A"), "B")


def shift_pattern(pattern, steps: int = 1) -> PhotonPattern:
    """Pattern after ``steps`` cyclic mode shifts (mode ``m`` -> ``m + steps``)."""
    return PhotonPattern(np.roll(np.asarray(pattern), steps))
