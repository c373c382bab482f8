"""Command line entry point.

Exit codes: 0 success, 1 mathematical failure (the input object is not
what it claims to be), 2 usage error or shape mismatch, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import io
from .errors import BudgetExceeded, ConditionViolated, QmatError, ShapeMismatch
from .idyll import Identity, Inclusion, ToKrasner, idyll_by_name
from .matroid import (
    DEFAULT_BUDGET,
    circuits,
    cocircuits,
    contract,
    covectors,
    delete,
    dual,
    push_forward_matroid,
    vectors,
)
from .morphism import (
    contract_morphism,
    delete_morphism_dual,
    factorization_check,
    is_morphism_circuits,
    is_morphism_pluecker,
    is_morphism_vectors,
    morphism_witness,
    preimage,
    restrict_morphism,
    transpose,
)
from .quiver import coefficient_quiver, dual_dimension, is_forest, is_tree, subrepresentations
from .quiver_matroid import enumerate_points
from .tits import euler_via_tits, tits_space

OK, FAILED, USAGE, BUDGET = 0, 1, 2, 3


class Failed(Exception):
    """The command ran, and the answer is negative."""

    def __init__(self, payload):
        super().__init__()
        self.payload = payload


def _labels(text: str | None) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()] if text else []


def _emit(payload, fmt: str):
    if fmt == "json":
        print(json.dumps(payload, indent=2))
        return
    if isinstance(payload, dict):
        for key, value in payload.items():
            print(f"{key}: {value if not isinstance(value, (dict, list)) else json.dumps(value)}")
    elif isinstance(payload, list):
        for item in payload:
            print(item if not isinstance(item, (dict, list)) else json.dumps(item))
    else:
        print(payload)


def _matroid(path):
    return io.matroid_from_json(io.read_json(path))


# matroid commands


def matroid_validate(args):
    M = _matroid(args.file)
    return {"valid": True, "idyll": M.idyll.name, "rank": M.rank, "bases": len(M.values)}


def matroid_dual(args):
    return io.matroid_to_json(dual(_matroid(args.file)))


def matroid_minor(args):
    M = _matroid(args.file)
    contracted = _labels(args.contract)
    deleted = _labels(args.delete)
    if set(contracted) & set(deleted):
        raise ShapeMismatch("contracted and deleted labels overlap")
    if contracted:
        M = contract(M, contracted)
    if deleted:
        M = delete(M, deleted)
    return io.matroid_to_json(M)


def matroid_circuits(args):
    M = _matroid(args.file)
    found = cocircuits(M) if args.co else circuits(M)
    return io.vectors_to_json(M, found)


def matroid_vectors(args):
    M = _matroid(args.file)
    found = covectors(M, args.budget) if args.co else vectors(M, args.budget)
    return {"ground": [str(e) for e in M.ground], "vectors": io.vectors_to_json(M, found)}


def matroid_pushforward(args):
    M = _matroid(args.file)
    target = idyll_by_name(args.to)
    if target == M.idyll:
        f = Identity(target)
    elif target.name == "K":
        f = ToKrasner(M.idyll)
    else:
        f = Inclusion(M.idyll, target)
    return io.matroid_to_json(push_forward_matroid(f, M))


# morphism commands


def _phi(args):
    return io.morphism_from_json(io.read_json(args.file))


def morphism_check(args):
    phi = _phi(args)
    N, M = _matroid(args.source), _matroid(args.target)
    report = {
        "pluecker": is_morphism_pluecker(phi, N, M),
        "circuits": is_morphism_circuits(phi, N, M),
        "vectors": is_morphism_vectors(phi, N, M, args.budget),
        "factorization": factorization_check(phi, N, M),
    }
    agree = len(set(report.values())) == 1
    report["concordant"] = agree
    report["morphism"] = report["pluecker"]
    witness = morphism_witness(phi, N, M)
    if witness is not None:
        report["witness"] = {"y": [str(e) for e in witness[0]], "x": [str(e) for e in witness[1]]}
    if not (report["morphism"] and agree):
        raise Failed(report)
    return report


def morphism_preimage(args):
    return io.matroid_to_json(preimage(_phi(args), _matroid(args.target)))


def morphism_minor(args):
    phi = _phi(args)
    A, B = _labels(args.A), _labels(args.B)
    make = {"restrict": restrict_morphism, "contract": contract_morphism, "delete": delete_morphism_dual}[args.kind]
    return io.morphism_to_json(make(phi, A, B))


def morphism_transpose(args):
    return io.morphism_to_json(transpose(_phi(args)))


# quiver commands


def _rep_and_ranks(args):
    rep = io.rep_from_json(io.read_json(args.rep))
    return rep, io.parse_rank(args.rank, rep)


def quiver_enumerate(args):
    rep, ranks = _rep_and_ranks(args)
    points = enumerate_points(rep, ranks, idyll_by_name(args.idyll), args.budget, args.threads)
    if args.count_only:
        return len(points)
    return [io.point_to_json(p) for p in points]


def quiver_tits(args):
    rep, ranks = _rep_and_ranks(args)
    points = enumerate_points(rep, ranks, budget=args.budget, threads=args.threads)
    tits = tits_space(rep, ranks, points)
    if args.count_only:
        return len(tits)
    return [io.point_to_json(p) for p in tits]


def quiver_euler(args):
    rep, ranks = _rep_and_ranks(args)
    sequence = io.gradings_from_json(io.read_json(args.gradings), rep) if args.gradings else None
    points = enumerate_points(rep, ranks, budget=args.budget, threads=args.threads)
    return euler_via_tits(rep, ranks, sequence, points).as_dict()


def quiver_subreps(args):
    rep = io.rep_from_json(io.read_json(args.rep))
    if args.dim:
        dims = io.parse_rank(args.dim, rep)
    elif args.rank:
        dims = dual_dimension(rep, io.parse_rank(args.rank, rep))
    else:
        raise ShapeMismatch("give --dim or --rank")
    found = subrepresentations(rep, dims)
    if args.count_only:
        return len(found)
    return [{str(v): [str(e) for e in labels] for v, labels in omega.items()} for omega in found]


def quiver_coeffquiver(args):
    rep = io.rep_from_json(io.read_json(args.rep))
    graph = coefficient_quiver(rep)
    return {
        "vertices": [f"{v}:{e}" for v, e in graph.vertices],
        "arrows": [{"arrow": str(a.name[0]), "from": f"{a.source[0]}:{a.source[1]}",
                    "to": f"{a.target[0]}:{a.target[1]}"} for a in graph.arrows],
        "is_tree": is_tree(graph),
        "is_forest": is_forest(graph),
    }


def _quiver_options(p, rank_required=True):
    p.add_argument("--rep", required=True, help="representation JSON file")
    p.add_argument("--rank", required=rank_required, help="comma separated ranks in vertex order")
    p.add_argument("--idyll", default="K")
    p.add_argument("--count-only", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="qmat", parents=[common],
                                     description="Matroids over idylls and quiver matroids.")
    top = parser.add_subparsers(dest="group", required=True)

    mat = top.add_parser("matroid", parents=[common]).add_subparsers(dest="command", required=True)
    p = mat.add_parser("validate", parents=[common])
    p.add_argument("file")
    p.set_defaults(run=matroid_validate)
    p = mat.add_parser("dual", parents=[common])
    p.add_argument("file")
    p.set_defaults(run=matroid_dual)
    p = mat.add_parser("minor", parents=[common])
    p.add_argument("file")
    p.add_argument("--contract")
    p.add_argument("--delete")
    p.set_defaults(run=matroid_minor)
    for name, run in (("circuits", matroid_circuits), ("vectors", matroid_vectors)):
        p = mat.add_parser(name, parents=[common])
        p.add_argument("file")
        p.add_argument("--co", action="store_true", help="dual notion (cocircuits, covectors)")
        p.set_defaults(run=run)
    p = mat.add_parser("pushforward", parents=[common])
    p.add_argument("file")
    p.add_argument("--to", required=True, help="target idyll")
    p.set_defaults(run=matroid_pushforward)

    mor = top.add_parser("morphism", parents=[common]).add_subparsers(dest="command", required=True)
    p = mor.add_parser("check", parents=[common])
    p.add_argument("file")
    p.add_argument("--source", required=True, help="matroid on the source")
    p.add_argument("--target", required=True, help="matroid on the target")
    p.set_defaults(run=morphism_check)
    p = mor.add_parser("preimage", parents=[common])
    p.add_argument("file")
    p.add_argument("--target", required=True)
    p.set_defaults(run=morphism_preimage)
    p = mor.add_parser("minor", parents=[common])
    p.add_argument("file")
    p.add_argument("--kind", choices=("restrict", "contract", "delete"), required=True)
    p.add_argument("--A", default="", help="source labels")
    p.add_argument("--B", default="", help="target labels")
    p.set_defaults(run=morphism_minor)
    p = mor.add_parser("transpose", parents=[common])
    p.add_argument("file")
    p.set_defaults(run=morphism_transpose)

    quiv = top.add_parser("quiver", parents=[common]).add_subparsers(dest="command", required=True)
    for sub in (quiv, top):
        p = sub.add_parser("enumerate", parents=[common])
        _quiver_options(p)
        p.set_defaults(run=quiver_enumerate)
        p = sub.add_parser("tits", parents=[common])
        _quiver_options(p)
        p.set_defaults(run=quiver_tits)
        p = sub.add_parser("euler", parents=[common])
        _quiver_options(p)
        p.add_argument("--gradings", help="JSON file with a grading or a sequence of gradings")
        p.set_defaults(run=quiver_euler)
    p = quiv.add_parser("subreps", parents=[common])
    _quiver_options(p, rank_required=False)
    p.add_argument("--dim", help="comma separated dimension vector")
    p.set_defaults(run=quiver_subreps)
    p = quiv.add_parser("coeffquiver", parents=[common])
    p.add_argument("--rep", required=True)
    p.set_defaults(run=quiver_coeffquiver)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", "json")
    args.budget = getattr(args, "budget", DEFAULT_BUDGET)
    args.threads = getattr(args, "threads", 1)
    if args.budget < 1 or args.threads < 1:
        parser.error("--budget and --threads must be positive")
    try:
        _emit(args.run(args), fmt)
        return OK
    except Failed as exc:
        _emit(exc.payload, fmt)
        return FAILED
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except (ShapeMismatch, io.ParseError, ConditionViolated) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    except QmatError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
