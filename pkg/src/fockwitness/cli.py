"""Command-line front end.

Exit codes: 0 success, 2 usage or parse error, 3 I/O or resource error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from math import comb

import numpy as np

from . import entangle, patterns, witness
from .fock import (DomainError, PhotonPattern, ResourceError, basis_state,
                   enumerate_basis, mix, uniform_mixture)
from .linop import apply, dft_matrix, lift
from .serialize import complex_pairs, load_state, state_to_dict

EXIT_USAGE = 2
EXIT_RESOURCE = 3
SUPPRESSION_TOL = 1e-12


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def max_dim() -> int:
    return int(os.environ.get("FOCKWITNESS_MAX_DIM", "65536"))


def _check_dim(dim: int) -> None:
    cap = max_dim()
    if dim > cap:
        raise CLIError(f"joint dimension {dim} exceeds FOCKWITNESS_MAX_DIM={cap}",
                       EXIT_RESOURCE)


def _partition_dim(M: int, N: int) -> int:
    return comb(M + N - 1, N) * comb(2 * M - N - 1, M - N)


def _check_partition(M: int, N: int) -> None:
    if M < 1:
        raise CLIError(f"-M must be positive, got {M}", EXIT_USAGE)
    if not 0 <= N <= M:
        raise CLIError(f"-N must be between 0 and M={M}, got {N}", EXIT_USAGE)


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise CLIError(f"cannot write {path}: {exc}", EXIT_RESOURCE) from exc


def _json(obj) -> str:
    return json.dumps(obj, indent=2)


def _resolve_state(args):
    """Partition state from ``--state`` or from ``-M``/``-N`` (ideal state)."""
    if args.state:
        try:
            state = load_state(args.state)
        except (OSError, json.JSONDecodeError, DomainError) as exc:
            raise CLIError(f"cannot read state file {args.state}: {exc}",
                           EXIT_RESOURCE) from exc
        if isinstance(state, entangle.StratifiedState):
            if args.N is None:
                raise CLIError("state file has several strata; pick one with -N",
                               EXIT_USAGE)
            try:
                state = state.project(args.N)
            except DomainError as exc:
                raise CLIError(str(exc), EXIT_USAGE) from exc
        _check_dim(len(state.basis[0]) * len(state.basis[1]))
        return state
    if args.M is None or args.N is None:
        raise CLIError("give --state FILE or both -M and -N", EXIT_USAGE)
    _check_partition(args.M, args.N)
    _check_dim(_partition_dim(args.M, args.N))
    return entangle.phi_partition(args.M, args.N)


def _dump_unitary(path: str, M: int, N: int) -> None:
    f = dft_matrix(M)
    basis = enumerate_basis(M, N)
    doc = {"M": M, "N": N, "mode_unitary": complex_pairs(f.entries),
           "basis": [str(p) for p in basis],
           "fock_unitary": complex_pairs(lift(f, basis).matrix)}
    _emit(_json(doc), path)


# ------------------------------------------------------------------ commands

def cmd_generate(args) -> str:
    if args.M is None:
        raise CLIError("-M is required", EXIT_USAGE)
    if args.N is not None:
        _check_partition(args.M, args.N)
        _check_dim(_partition_dim(args.M, args.N))
        state = entangle.phi_partition(args.M, args.N)
    else:
        if args.M < 1:
            raise CLIError(f"-M must be positive, got {args.M}", EXIT_USAGE)
        _check_dim(sum(_partition_dim(args.M, n) for n in range(args.M + 1)))
        try:
            state = entangle.generate_psi(args.M)
        except ResourceError as exc:
            raise CLIError(str(exc), EXIT_RESOURCE) from exc
    return _json(state_to_dict(state))


def cmd_partition(args) -> str:
    if args.M is None or args.M < 1:
        raise CLIError("-M must be a positive integer", EXIT_USAGE)
    M = args.M
    rows = []
    for N in range(M + 1):
        exact = entangle.partition_probability(M, N, exact=True)
        rows.append({"N_A": N, "N_B": M - N, "probability": float(exact),
                     "probability_exact": str(exact),
                     "gaussian_estimate": entangle.gaussian_partition_estimate(M, N),
                     "schmidt_rank": comb(M, N)})
    empty_side = 2 * entangle.partition_probability(M, 0, exact=True)
    summary = {"zero_photons_at_A_or_B": str(empty_side),
               "usable_entanglement": str(1 - empty_side)}
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(rows[0]))
        for r in rows:
            writer.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in r.values()])
        return buf.getvalue()
    return _json({"M": M, "partitions": rows, **summary})


def _display_orders(M: int, N_A: int, N_B: int, basis_kind: str):
    if basis_kind == "input":
        groups = lambda n: [(str(c), list(c.elements)) for c in patterns.pattern_classes(M, n)]
    else:
        groups = lambda n: [(f"K={K}", ps) for K, ps in patterns.k_blocks(M, n).items()]
    return groups(N_A), groups(N_B)


def probability_report(state, basis_kind: str) -> dict:
    """Joint distribution in display order, with both orderings recorded."""
    basis_a, basis_b = state.basis
    M = basis_a.M
    if basis_kind == "dft":
        probs = apply(dft_matrix(M), state, "both").probabilities()
    else:
        probs = state.probabilities()
    groups_a, groups_b = _display_orders(M, basis_a.N, basis_b.N, basis_kind)
    order_a = [p for _, ps in groups_a for p in ps]
    order_b = [p for _, ps in groups_b for p in ps]
    ia = [basis_a.index(p) for p in order_a]
    ib = [basis_b.index(p) for p in order_b]
    table = probs[np.ix_(ia, ib)]
    return {
        "basis": basis_kind, "M": M, "N_A": basis_a.N, "N_B": basis_b.N,
        "row_order": [str(p) for p in order_a],
        "col_order": [str(p) for p in order_b],
        "canonical_row_order": [str(p) for p in basis_a],
        "canonical_col_order": [str(p) for p in basis_b],
        "row_blocks": [{"label": lab, "size": len(ps)} for lab, ps in groups_a],
        "col_blocks": [{"label": lab, "size": len(ps)} for lab, ps in groups_b],
        "row_marginals": table.sum(axis=1).tolist(),
        "col_marginals": table.sum(axis=0).tolist(),
        "total": float(table.sum()),
        "probabilities": table.tolist(),
    }


def _report_csv(rep: dict) -> str:
    buf = io.StringIO()
    for key in ("basis", "M", "N_A", "N_B"):
        buf.write(f"# {key}: {rep[key]}\n")
    for key in ("row_blocks", "col_blocks"):
        blocks = " ".join(f"{b['label']}:{b['size']}" for b in rep[key])
        buf.write(f"# {key}: {blocks}\n")
    for key in ("canonical_row_order", "canonical_col_order"):
        buf.write(f"# {key}: {' '.join(rep[key])}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["A\\B"] + rep["col_order"])
    for label, row in zip(rep["row_order"], rep["probabilities"]):
        writer.writerow([label] + [f"{v:.12g}" for v in row])
    return buf.getvalue()


def cmd_probabilities(args) -> str:
    state = _resolve_state(args)
    rep = probability_report(state, args.basis)
    if args.dump_unitary:
        _dump_unitary(args.dump_unitary, rep["M"], rep["N_A"])
    if args.format == "csv":
        return _report_csv(rep)
    return _json(rep)


def cmd_classes(args) -> str:
    if args.M is None or args.N is None:
        raise CLIError("-M and -N are required", EXIT_USAGE)
    if args.M < 1 or args.N < 0:
        raise CLIError("need M >= 1 and N >= 0", EXIT_USAGE)
    _check_dim(comb(args.M + args.N - 1, args.N))
    out = []
    for c in patterns.pattern_classes(args.M, args.N):
        comp = patterns.complementary_class(c)
        out.append({"representative": str(c.representative),
                    "cardinality": c.cardinality,
                    "allowed_K": list(c.allowed_K),
                    "elements": [str(p) for p in c.elements],
                    "complementary": None if comp is None else str(comp.representative)})
    return _json({"M": args.M, "N": args.N, "classes": out})


def cmd_witness(args) -> str:
    state = _resolve_state(args)
    M, N = state.basis[0].M, state.basis[0].N
    doc = {"M": M, "N_A": N, "N_B": M - N, **witness.evaluate(state).to_dict()}
    if args.noise_p is not None:
        if not 0.0 <= args.noise_p <= 1.0:
            raise CLIError("--noise-p must lie in [0, 1]", EXIT_USAGE)
        law = witness.mixture_threshold(M, N, state)
        noisy = mix([(args.noise_p, state),
                     (1 - args.noise_p, uniform_mixture(*state.basis))])
        doc["noise"] = {"p": args.noise_p,
                        "witness_value": witness.evaluate(noisy).witness_value,
                        "slope": law.slope, "offset": law.offset,
                        "threshold": law.threshold}
    if args.samples:
        values = witness.sample_separable_witness(M, N, args.samples, args.seed)
        doc["separable_samples"] = {"count": args.samples, "seed": args.seed,
                                    "max_witness_value": float(values.max())}
    return _json(doc)


def cmd_bounds(args) -> str:
    if args.M is None or args.N is None:
        raise CLIError("-M and -N are required", EXIT_USAGE)
    if not 1 <= args.N <= args.M - 1:
        raise CLIError("bounds need 1 <= N <= M - 1", EXIT_USAGE)
    M, N = args.M, args.N
    _check_dim(_partition_dim(M, N))
    bound = witness.basic_bound(M, N)
    th = witness.state_fidelity_thresholds(M, N)
    d_p = witness.ideal_defect(M, N)
    doc = {"M": M, "N": N,
           "min_cardinality": witness.min_cardinality(M, N),
           "basic_bound": float(bound), "basic_bound_exact": str(bound),
           "ideal_D_p": float(d_p), "ideal_D_p_exact": str(d_p),
           "ideal_optimized_lhs_exact": str(2 - d_p),
           "basic_fidelity_threshold": float(th.basic),
           "basic_fidelity_threshold_exact": str(th.basic),
           "tight_fidelity_threshold": float(th.tight),
           "tight_fidelity_threshold_exact": str(th.tight)}
    dim = _partition_dim(M, N)
    if args.operator or dim <= 1024:
        try:
            w = witness.witness_operator(M, N)
        except ResourceError as exc:
            raise CLIError(str(exc), EXIT_RESOURCE) from exc
        doc["witness_max_eigenvalue"] = float(np.linalg.eigvalsh(w)[-1])
        doc["witness_max_eigenvalue_expected"] = 1 - 1 / M
    return _json(doc)


def suppression_report(M: int, pattern: PhotonPattern) -> dict:
    basis = enumerate_basis(M, pattern.N)
    out = apply(dft_matrix(M), basis_state(basis, pattern)).probabilities()
    cls = patterns.pattern_class(pattern)
    applies = cls.cardinality == 1
    groups, violations = [], []
    for K, ps in patterns.k_blocks(M, pattern.N).items():
        probs = {str(p): float(out[basis.index(p)]) for p in ps}
        groups.append({"K": K, "total": float(sum(probs.values())), "outcomes": probs})
        if applies and K != 0:
            violations += [p for p, v in probs.items() if v >= SUPPRESSION_TOL]
    suppressed = [g["total"] for g in groups if g["K"] != 0]
    return {"M": M, "pattern": str(pattern), "class_cardinality": cls.cardinality,
            "suppression_applies": applies,
            "max_K_nonzero_probability": max(
                (v for g in groups if g["K"] != 0 for v in g["outcomes"].values()),
                default=0.0),
            "K_nonzero_total": float(sum(suppressed)),
            "violations": violations, "groups": groups}


def cmd_suppression(args) -> str:
    if args.M is None:
        raise CLIError("-M is required", EXIT_USAGE)
    try:
        pattern = PhotonPattern.parse(args.pattern)
    except DomainError as exc:
        raise CLIError(str(exc), EXIT_USAGE) from exc
    if pattern.M != args.M:
        raise CLIError(f"pattern {pattern} does not have {args.M} modes", EXIT_USAGE)
    _check_dim(comb(args.M + pattern.N - 1, pattern.N))
    if args.dump_unitary:
        _dump_unitary(args.dump_unitary, args.M, pattern.N)
    return _json(suppression_report(args.M, pattern))


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockwitness",
        description="Beam-split single-photon entanglement: states, DFT statistics, witnesses.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, state=False):
        p.add_argument("-M", type=int, help="modes per party")
        p.add_argument("-N", type=int, help="photons at A")
        p.add_argument("--output", "-o", help="write to this file instead of stdout")
        if state:
            p.add_argument("--state", help="state JSON written by 'generate'")
        return p

    p = common(sub.add_parser("generate", help="dump the entangled state as JSON"))
    p.set_defaults(func=cmd_generate)

    p = common(sub.add_parser("partition", help="photon-number partition statistics"))
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_partition)

    p = common(sub.add_parser("probabilities", help="joint detection probabilities"),
               state=True)
    p.add_argument("--basis", choices=("input", "dft"), default="input")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--dump-unitary", metavar="PATH", help="write the lifted DFT as JSON")
    p.set_defaults(func=cmd_probabilities)

    p = common(sub.add_parser("classes", help="cyclic pattern classes"))
    p.set_defaults(func=cmd_classes)

    p = common(sub.add_parser("witness", help="fidelities, defect and witness value"),
               state=True)
    p.add_argument("--noise-p", type=float, help="weight of the state in a mixture with white noise")
    p.add_argument("--samples", type=int, default=0,
                   help="also evaluate this many random product states")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_witness)

    p = common(sub.add_parser("bounds", help="separable bounds and fidelity thresholds"))
    p.add_argument("--operator", action="store_true",
                   help="diagonalize the witness operator even for large spaces")
    p.set_defaults(func=cmd_bounds)

    p = common(sub.add_parser("suppression", help="DFT outputs of one input pattern by K"))
    p.add_argument("pattern", help='input pattern, e.g. "1111" or "2,0,2,0"')
    p.add_argument("--dump-unitary", metavar="PATH", help="write the lifted DFT as JSON")
    p.set_defaults(func=cmd_suppression)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _emit(args.func(args), args.output)
    except CLIError as exc:
        if exc.code == EXIT_USAGE:
            parser.print_usage(sys.stderr)
        print(f"fockwitness: error: {exc}", file=sys.stderr)
        return exc.code
    except ResourceError as exc:
        print(f"fockwitness: error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    return 0


if __name__ == "__main__":
    sys.exit(main())
