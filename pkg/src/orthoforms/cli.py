"""Command-line front end.

Each command prints one JSON document on standard output and exits with
0 (property holds), 1 (property fails) or 2 (bad input).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from . import documents as docs
from .forms import (InconsistencyError, complexify_form, decompose, find_orthogonality_violation,
                    is_extension_orthogonal, is_orthogonal_form, orthogonality_oracle,
                    phi2_eliminable, representation_space_dim)
from .genfuzz import GenConfig, UnknownSuite, run_suite, suite_names
from .preservers import (analyze, find_op_violation, invert_biop, is_biorthogonality_preserving,
                         is_orthogonality_preserving)
from .reproductions import CLAIMED_EXTENSION_VALUE, biop_instance, complexification_instance

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _out(doc) -> None:
    sys.stdout.write(docs.emit(doc))


def _mode(args) -> docs.NumberMode:
    return docs.NumberMode(float_input=args.float_input, tolerance=args.tolerance or 0.0)


def _load(args, kind: str):
    path = Path(args.file)
    try:
        return docs.PARSERS[kind](docs.load_json(path), path.parent, _mode(args))
    except (docs.DocumentError, ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None


def _form_witness(V) -> dict:
    i, j = find_orthogonality_violation(V)
    bv = V.space.basis_vectors
    return {"basis_pair": [str(bv[i]), str(bv[j])], "value": docs.fraction_str(V.matrix[i][j]),
            "pair": [docs.element_doc(V.space.basis[i]), docs.element_doc(V.space.basis[j])]}


def cmd_check_form(args) -> int:
    V = _load(args, "form")
    ok = is_orthogonal_form(V)
    hit = orthogonality_oracle(V, trials=args.oracle_trials, seed=args.seed)
    out = {"command": "check-form", "orthogonal": ok, "oracle_agrees": ok == (hit is None)}
    if not ok:
        out["witness"] = _form_witness(V)
    if hit is not None:
        out["oracle_counterexample"] = [docs.element_doc(x) for x in hit]
    _out(out)
    return EXIT_OK if ok else EXIT_FALSE


def cmd_decompose(args) -> int:
    V = _load(args, "form")
    if not is_orthogonal_form(V):
        _out({"command": "decompose", "orthogonal": False, "witness": _form_witness(V)})
        return EXIT_FALSE
    dec = decompose(V)
    body = docs.decomposition_doc(dec)
    if args.out:
        Path(args.out).write_text(docs.emit(body), encoding="utf-8")
    _out({"command": "decompose", "orthogonal": True, "verified": True,
          "representation_space_dim": representation_space_dim(V), **body})
    return EXIT_OK


def cmd_complexify(args) -> int:
    V = _load(args, "form")
    W = complexify_form(V)
    ext = is_extension_orthogonal(W)
    elim = phi2_eliminable(V)
    _out({"command": "complexify", "form_orthogonal": is_orthogonal_form(V),
          "extension_orthogonal": ext, "phi2_eliminable": elim, "agree": ext == elim,
          "extension": docs.complex_form_doc(W)})
    if ext != elim:
        raise InconsistencyError("extension orthogonality disagrees with phi2 elimination")
    return EXIT_OK if ext else EXIT_FALSE


def _map_witness(T) -> dict:
    i, j = find_op_violation(T)
    bv = T.domain.basis_vectors
    return {"basis_pair": [str(bv[i]), str(bv[j])],
            "images": [docs.element_doc(T.image(i)), docs.element_doc(T.image(j))]}


def cmd_analyze_map(args) -> int:
    T = _load(args, "map")
    if not is_orthogonality_preserving(T):
        _out({"command": "analyze-map", "orthogonality_preserving": False, "witness": _map_witness(T)})
        return EXIT_FALSE
    _out({"command": "analyze-map", "orthogonality_preserving": True,
          "structure": docs.structure_doc(analyze(T))})
    return EXIT_OK


def cmd_check_biop(args) -> int:
    T = _load(args, "map")
    decision = is_biorthogonality_preserving(T)
    out = {"command": "check-biop", "biorthogonality_preserving": decision.ok}
    if decision.ok:
        S = invert_biop(decision.certificate)
        out["certificate"] = docs.certificate_doc(decision.certificate, S)
    else:
        out["reason"] = decision.reason
    _out(out)
    return EXIT_OK if decision.ok else EXIT_FALSE


def cmd_reproduce(args) -> int:
    if args.example == "complexification":
        r = complexification_instance()
        value = r["extension_value"]
        out = {
            "example": "complexification",
            "form": docs.form_doc(r["form"]),
            "extension_value": [docs.fraction_str(value.re), docs.fraction_str(value.im)],
            "claimed_extension_value": [docs.fraction_str(CLAIMED_EXTENSION_VALUE.re),
                                        docs.fraction_str(CLAIMED_EXTENSION_VALUE.im)],
            "verdict": ("extension NOT orthogonal" if r["checks"]["extension_not_orthogonal"]
                        else "extension orthogonal"),
            "decomposition": docs.decomposition_doc(r["decomposition"]),
        }
    else:
        r = biop_instance()
        st = r["structure"]
        out = {
            "example": "biop",
            "map": docs.map_doc(r["map"]),
            "structure": docs.structure_doc(st),
            "reason": r["decision"].reason,
        }
    out["checks"] = r["checks"]
    out["status"] = "pass" if all(r["checks"].values()) else "fail"
    _out(out)
    return EXIT_OK if out["status"] == "pass" else EXIT_FALSE


def cmd_fuzz(args) -> int:
    try:
        cfg = GenConfig(seed=args.seed, max_fixed=args.max_f, max_cycles=args.max_cycles,
                        trials=args.trials, mutate=args.mutate)
        report = run_suite(args.suite, cfg)
    except UnknownSuite:
        raise InputError(f"unknown suite {args.suite!r}; choose from: all, " + ", ".join(suite_names()))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _out(report)
    return EXIT_OK if report["status"] == "pass" else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    num = argparse.ArgumentParser(add_help=False)
    num.add_argument("--float-input", action="store_true",
                     help="accept JSON numbers and rationalize them")
    num.add_argument("--tolerance", type=float, default=None,
                     help="rationalization tolerance for --float-input")

    p = argparse.ArgumentParser(prog="orthoforms", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, file=True):
        sp = sub.add_parser(name, parents=[num] if file else [], help=help_)
        if file:
            sp.add_argument("file")
        sp.set_defaults(func=fn)
        return sp

    sp = add("check-form", cmd_check_form, "decide orthogonality of a form")
    sp.add_argument("--oracle-trials", type=int, default=256)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("decompose", cmd_decompose, "write V(x,y) = phi1(xy) + phi2(xy*)")
    sp.add_argument("--out")
    add("complexify", cmd_complexify, "orthogonality of the complex extension")
    add("analyze-map", cmd_analyze_map, "support map and weights of an OP map")
    add("check-biop", cmd_check_biop, "decide bi-orthogonality preservation")
    sp = add("reproduce", cmd_reproduce, "rebuild a worked instance", file=False)
    sp.add_argument("--example", required=True, choices=["complexification", "biop"])
    sp = add("fuzz", cmd_fuzz, "run property suites", file=False)
    sp.add_argument("--suite", default="all")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-f", type=int, default=3)
    sp.add_argument("--max-cycles", type=int, default=3)
    sp.add_argument("--mutate", action="store_true", help="inject a mutation into generated objects")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tolerance", None) is not None:
        if not args.float_input:
            parser.error("--tolerance requires --float-input")
        if args.tolerance < 0:
            parser.error("--tolerance must be non-negative")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"orthoforms: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InconsistencyError as exc:
        print(f"orthoforms: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_FALSE


if __name__ == "__main__":
    sys.exit(main())
