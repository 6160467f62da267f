"""Command-line entry point.

Exit codes: 0 success or robust, 2 fragile (or unsolvable), 1 error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .bottleneck import minimax_bottleneck, repair, single_edge_fixes
from .graph import GraphError, StructurePattern, dump_graph, expand_shared, load_graph
from .numeric import RandomizedConfig, StructuredLinearSystem, classify_solvability
from .report import analyze, format_report, render_dot, verify
from .structural import cycle_cover

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FRAGILE = 2


def _config(args) -> RandomizedConfig:
    return RandomizedConfig(seed=args.seed, trials=args.trials, rank_rel_tol=args.tol)


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def cmd_analyze(args) -> int:
    g = load_graph(args.file)
    report = analyze(g, _config(args))
    _emit(args, _dumps(report.as_dict(g)) if args.json else format_report(g, report))
    return EXIT_OK if report.coverable else EXIT_FRAGILE


def cmd_cover(args) -> int:
    g = load_graph(args.file)
    cover = cycle_cover(g)
    if args.json:
        doc = None if cover is None else [list(c) for c in cover.cycles]
        _emit(args, _dumps({"cover": doc}))
    elif cover is None:
        _emit(args, "none\n")
    else:
        _emit(args, "".join(" -> ".join(c) + "\n" for c in cover.cycles))
    return EXIT_OK if cover is not None else EXIT_FRAGILE


def cmd_repair(args) -> int:
    g = load_graph(args.file)
    if args.all:
        fixes = [] if cycle_cover(g) is not None else list(single_edge_fixes(g))
        if args.json:
            _emit(args, _dumps({"fixes": [list(e) for e in fixes]}))
        else:
            _emit(args, "".join(f"{u} -> {v}\n" for u, v in fixes))
        return EXIT_OK
    plan = repair(g)
    if args.json:
        doc = {"additions": [list(e) for e in plan.additions], "trace": list(plan.trace)}
        _emit(args, _dumps(doc))
    else:
        lines = [f"deficiency {plan.trace[0]}"]
        for (u, v), m in zip(plan.additions, plan.trace[1:]):
            lines.append(f"add {u} -> {v}  (deficiency {m})")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    g = load_graph(args.file)
    summary = verify(g, _config(args), points=args.points)
    if args.json:
        _emit(args, _dumps(summary))
    else:
        lines = [
            f"seed {summary['seed']}, trials {summary['trials']}, tol {summary['tolerance']:g}",
            f"structural rank {summary['structural_rank']}, coverable {summary['coverable']}",
        ]
        for c in summary["checks"]:
            detail = ", ".join(f"{k}={v}" for k, v in c.items() if k not in ("check", "passed"))
            lines.append(f"{'PASS' if c['passed'] else 'FAIL'} {c['check']}: {detail}")
        lines.append("all checks passed" if summary["passed"] else "some checks FAILED")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if summary["passed"] else EXIT_ERROR


def cmd_render(args) -> int:
    g = load_graph(args.file)
    _emit(args, render_dot(g, minimax_bottleneck(g)))
    return EXIT_OK


def load_linear_system(path) -> StructuredLinearSystem:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphError(f"malformed JSON: {exc}") from None
    try:
        m, n = int(doc["m"]), int(doc["n"])
        a = StructurePattern(m, n, frozenset(tuple(p) for p in doc["a_pattern"]))
        b_rows = set(doc.get("b_pattern", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"bad linear system document: {exc}") from None
    if not b_rows <= set(range(m)):
        raise GraphError("b_pattern refers to a row outside [0, m)")
    return StructuredLinearSystem(a, tuple(i in b_rows for i in range(m)))


def cmd_solvable(args) -> int:
    verdict = classify_solvability(load_linear_system(args.file), _config(args))
    doc = {
        "verdict": verdict.verdict.value,
        "agreeing_trials": verdict.agreeing_trials,
        "trials": verdict.trials,
    }
    if args.json:
        _emit(args, _dumps(doc))
    else:
        _emit(args, f"{doc['verdict']} ({doc['agreeing_trials']}/{doc['trials']} trials)\n")
    return EXIT_OK if verdict.verdict.value == "AlmostAlways" else EXIT_FRAGILE


def _label_list(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def cmd_expand(args) -> int:
    g = load_graph(args.file)
    h = expand_shared(g, _label_list(args.support), _label_list(args.targets), args.label)
    _emit(args, dump_graph(h, pretty=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="graph JSON file (linear-system JSON for 'solvable')")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--trials", type=int, default=7, help="random instantiations (default 7)")
    common.add_argument("--tol", type=float, default=1e-8, help="relative singular value cutoff")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="structrobust",
        description="Structural robustness analysis of N equations in N unknowns.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("analyze", parents=[common], help="rank, coverability, bottlenecks").set_defaults(
        func=cmd_analyze
    )
    sub.add_parser("cover", parents=[common], help="print a cycle cover").set_defaults(func=cmd_cover)
    p = sub.add_parser("repair", parents=[common], help="plan edge additions")
    p.add_argument("--all", action="store_true", help="list every single-edge fix instead")
    p.set_defaults(func=cmd_repair)
    p = sub.add_parser("verify", parents=[common], help="numerical cross-checks")
    p.add_argument("--points", type=int, default=20, help="Jacobian sample points (default 20)")
    p.set_defaults(func=cmd_verify)
    sub.add_parser("render", parents=[common], help="DOT with bottleneck colouring").set_defaults(
        func=cmd_render
    )
    sub.add_parser("solvable", parents=[common], help="structured A x = b").set_defaults(
        func=cmd_solvable
    )
    p = sub.add_parser("expand", parents=[common], help="make a shared input explicit")
    p.add_argument("--support", required=True, help="comma-separated support nodes")
    p.add_argument("--targets", required=True, help="comma-separated target nodes")
    p.add_argument("--label", required=True, help="label of the new node")
    p.set_defaults(func=cmd_expand)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
