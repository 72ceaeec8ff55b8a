"""JSON forms of states and matrices."""

from __future__ import annotations

import json

import numpy as np

from .entangle import StratifiedState
from .fock import (DomainError, MixedEnsemble, PhotonPattern, PureState,
                   enumerate_basis, mix)

STATE_FORMAT = "fockwitness.state/1"


def complex_pairs(a) -> list:
    """Row-major nested lists of ``[re, im]`` pairs."""
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def from_complex_pairs(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape[-1] != 2:
        raise DomainError("expected [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _block_to_dict(state: PureState) -> dict:
    basis_a, basis_b = state.basis
    return {
        "N_A": basis_a.N,
        "N_B": basis_b.N,
        "basis_A": [str(p) for p in basis_a],
        "basis_B": [str(p) for p in basis_b],
        "amplitudes": complex_pairs(state.amplitudes),
    }


def _block_from_dict(M: int, d: dict) -> PureState:
    basis_a, basis_b = enumerate_basis(M, d["N_A"]), enumerate_basis(M, d["N_B"])
    pats_a = [PhotonPattern.parse(s) for s in d.get("basis_A", map(str, basis_a))]
    pats_b = [PhotonPattern.parse(s) for s in d.get("basis_B", map(str, basis_b))]
    amps = from_complex_pairs(d["amplitudes"]).reshape(len(pats_a), len(pats_b))
    # files may list patterns in any order
    out = np.zeros((len(basis_a), len(basis_b)), dtype=complex)
    rows = [basis_a.index(p) for p in pats_a]
    cols = [basis_b.index(p) for p in pats_b]
    out[np.ix_(rows, cols)] = amps
    return PureState((basis_a, basis_b), out)


def state_to_dict(state) -> dict:
    if isinstance(state, StratifiedState):
        return {"format": STATE_FORMAT, "kind": "stratified", "M": state.M,
                "blocks": [_block_to_dict(b) for b in state.blocks.values()]}
    if isinstance(state, MixedEnsemble):
        return {"format": STATE_FORMAT, "kind": "mixture", "M": state.basis[0].M,
                "components": [{"weight": w, "block": _block_to_dict(s)}
                               for w, s in state.components]}
    if not state.is_joint:
        raise DomainError("only joint states are serialized")
    return {"format": STATE_FORMAT, "kind": "pure", "M": state.basis[0].M,
            "blocks": [_block_to_dict(state)]}


def state_from_dict(d: dict):
    try:
        M, kind = int(d["M"]), d.get("kind", "pure")
        if kind == "mixture":
            return mix([(c["weight"], _block_from_dict(M, c["block"]))
                        for c in d["components"]])
        blocks = [_block_from_dict(M, b) for b in d["blocks"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed state document: {exc}") from exc
    if kind == "pure" and len(blocks) == 1:
        return blocks[0]
    return StratifiedState(M, {(b.basis[0].N, b.basis[1].N): b for b in blocks})


def dump_state(state, path) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_dict(state), fh)


def load_state(path):
    with open(path) as fh:
        return state_from_dict(json.load(fh))
