"""Command-line front end.

Exit codes: 0 success, 1 validation failure (a report is printed), 2 IO,
parse or usage errors.  Every failure also emits one machine-parseable
line ``error:<category>: ...`` on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bbn import bbn_from_dict, bbn_to_dot, load_bbn, save_bbn, validate
from .errors import (
    CycleError,
    CyclicStructureError,
    FormatError,
    InvalidBbnError,
    NotSelfContainedError,
)
from .intervention import compare_marginals, intervene_bbn
from .ordering import causal_ordering, ordering_to_dot
from .sem import (
    bbn_to_sem,
    check_equivalence,
    load_sem,
    roundtrip_check,
    sample,
    save_sem,
    sem_to_dict,
)
from .structure import check_system, load_system, system_from_dict
from .triangular import is_triangularizable, triangularize

VERIFY_TOLERANCE = 1e-9


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"error:usage: {message}", file=sys.stderr)
        raise SystemExit(2)


def _csv_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="causalstruct", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="report self-containment and acyclicity of a system")
    p.add_argument("system", type=Path)

    p = sub.add_parser("order", help="print the causal ordering of a system")
    p.add_argument("system", type=Path)
    p.add_argument("--dot", type=Path, help="also write the causal graph as DOT")

    p = sub.add_parser("triangularize", help="permute a system to lower-triangular form")
    p.add_argument("system", type=Path)

    p = sub.add_parser("to-sem", help="convert a network file to a threshold-equation file")
    p.add_argument("bbn", type=Path)
    p.add_argument("--out", type=Path, help="output path (stdout if omitted)")

    p = sub.add_parser("verify", help="check joint equivalence and the structural round trip")
    p.add_argument("bbn", type=Path)

    p = sub.add_parser("sample", help="tally seeded draws from a threshold-equation file")
    p.add_argument("sem", type=Path)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10000)

    p = sub.add_parser("intervene", help="impose a distribution on a node, cutting its arcs")
    p.add_argument("bbn", type=Path)
    p.add_argument("--node", required=True)
    p.add_argument("--dist", required=True, type=_csv_floats)
    p.add_argument("--out", required=True, type=Path, help="where to write the edited network")

    p = sub.add_parser("graph", help="emit DOT for a network or a system's ordering")
    p.add_argument("input", type=Path)
    p.add_argument("--dot", type=Path, help="output path (stdout if omitted)")

    return parser


def _require_valid(bbn):
    report = validate(bbn)
    if not report.valid:
        print(report.describe())
        raise InvalidBbnError("network failed validation", report)
    return bbn


def _cmd_check(args) -> int:
    matrix = load_system(args.system)
    report = check_system(matrix)
    if report.self_contained:
        print("self-contained: yes")
        print(f"acyclic: {'yes' if is_triangularizable(matrix) else 'no'}")
        return 0
    print("self-contained: no")
    if report.unused_variables:
        names = ", ".join(matrix.variable_names[v] for v in report.unused_variables)
        print(f"variables in no equation: {names}")
    if report.violation is not None:
        print(f"violating subset: {report.violation.describe(matrix)}")
    print("error:not-self-contained: system check failed", file=sys.stderr)
    return 1


def _cmd_order(args) -> int:
    matrix = load_system(args.system)
    ordering = causal_ordering(matrix)
    print("order  degree  variables")
    for cluster in ordering.clusters:
        names = ", ".join(matrix.variable_names[v] for v in sorted(cluster.variables))
        print(f"{cluster.order:>5}  {cluster.degree:>6}  {names}")
    print("edges:")

    def flow(edge):  # read top-down through the ordering
        u, v = edge
        return (
            ordering.clusters[ordering.cluster_of_variable(u)].order,
            ordering.clusters[ordering.cluster_of_variable(v)].order,
            u,
            v,
        )

    for u, v in sorted(ordering.variable_edges, key=flow):
        print(f"  {matrix.variable_names[u]} -> {matrix.variable_names[v]}")
    if args.dot:
        args.dot.write_text(ordering_to_dot(ordering), encoding="utf-8")
    return 0


def _cmd_triangularize(args) -> int:
    matrix = load_system(args.system)
    try:
        result = triangularize(matrix)
    except CyclicStructureError as exc:
        labels = ", ".join(
            matrix.equation_labels[e] for e in sorted(exc.remaining_equations)
        )
        print(f"error:cyclic: witness {{{labels}}}", file=sys.stderr)
        return 1
    print("row order: " + ", ".join(matrix.equation_labels[e] for e in result.row_perm))
    print("column order: " + ", ".join(matrix.variable_names[v] for v in result.col_perm))
    print("determined by:")
    for e, v in zip(result.row_perm, result.col_perm):
        print(f"  {matrix.equation_labels[e]} -> {matrix.variable_names[v]}")
    return 0


def _cmd_to_sem(args) -> int:
    bbn = _require_valid(load_bbn(args.bbn))
    sem = bbn_to_sem(bbn)
    if args.out:
        save_sem(sem, args.out)
    else:
        json.dump(sem_to_dict(sem), sys.stdout, indent=2)
        print()
    return 0


def _cmd_verify(args) -> int:
    bbn = _require_valid(load_bbn(args.bbn))
    sem = bbn_to_sem(bbn)
    deviation = check_equivalence(bbn, sem)
    ok = roundtrip_check(bbn)
    print(f"max deviation {deviation:.3e}; roundtrip: {'ok' if ok else 'FAIL'}")
    if deviation > VERIFY_TOLERANCE or not ok:
        print("error:verify: equivalence or round trip failed", file=sys.stderr)
        return 1
    return 0


def _cmd_sample(args) -> int:
    sem = load_sem(args.sem)
    counts = sample(sem, args.seed, args.count)
    total = args.count
    print(f"draws: {total}")
    print(f"seed: {args.seed}")
    rows = [
        (" ".join(f"{name}={v}" for name, v in zip(sem.variable_names, assignment)), n)
        for assignment, n in sorted(counts.items())
    ]
    width = max(len(text) for text, _ in rows)
    width = max(width, len("assignment"))
    print(f"{'assignment':<{width}}  {'count':>10}  frequency")
    for text, n in rows:
        print(f"{text:<{width}}  {n:>10}  {n / total:.6f}")
    return 0


def _cmd_intervene(args) -> int:
    before = _require_valid(load_bbn(args.bbn))
    try:
        node = before.index_of(args.node)
    except KeyError:
        print(f"error:usage: unknown node {args.node!r}", file=sys.stderr)
        return 2
    after = intervene_bbn(before, node, args.dist)
    save_bbn(after, args.out)
    deltas = compare_marginals(before, after)
    width = max(len("variable"), max(len(name) for name in deltas))
    print(f"{'variable':<{width}}  max marginal deviation")
    for name in (n.name for n in before.nodes):
        print(f"{name:<{width}}  {deltas[name]:.3e}")
    return 0


def _cmd_graph(args) -> int:
    with open(args.input, encoding="utf-8") as handle:
        doc = json.load(handle)
    if isinstance(doc, dict) and "nodes" in doc:
        text = bbn_to_dot(bbn_from_dict(doc))
    else:
        text = ordering_to_dot(causal_ordering(system_from_dict(doc)))
    if args.dot:
        args.dot.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


_HANDLERS = {
    "check": _cmd_check,
    "order": _cmd_order,
    "triangularize": _cmd_triangularize,
    "to-sem": _cmd_to_sem,
    "verify": _cmd_verify,
    "sample": _cmd_sample,
    "intervene": _cmd_intervene,
    "graph": _cmd_graph,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except OSError as exc:
        print(f"error:io: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error:parse: {exc}", file=sys.stderr)
        return 2
    except FormatError as exc:
        print(f"error:parse: {exc}", file=sys.stderr)
        return 2
    except NotSelfContainedError as exc:
        print(f"error:not-self-contained: {exc}", file=sys.stderr)
        return 1
    except (CyclicStructureError, CycleError) as exc:
        print(f"error:cyclic: {exc}", file=sys.stderr)
        return 1
    except InvalidBbnError as exc:
        print(f"error:invalid-bbn: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"error:usage: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
