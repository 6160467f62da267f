"""Aggregate analyses into reports, verification summaries and DOT output."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bottleneck import Bottleneck, backward_bottleneck, minimax_bottleneck
from .graph import StructureGraph, pattern_of
from .nonlinear import (
    jacobian_rank_sweep,
    manifold_dimension_at,
    probe_robustness,
    random_point,
    sample_function,
    solve_from_anchor,
)
from .numeric import RandomizedConfig, generic_rank_numeric, null_nodes_numeric
from .structural import CycleCover, cycle_cover, null_nodes, structural_rank

__all__ = ["AnalysisReport", "analyze", "verify", "render_dot", "format_report"]


@dataclass(frozen=True)
class AnalysisReport:
    n: int
    num_edges: int
    structural_rank: int
    deficiency: int
    coverable: bool
    cover: CycleCover | None
    forward_bottleneck: Bottleneck | None
    backward_bottleneck: Bottleneck | None
    numeric_rank: int
    trials: int
    tolerance: float

    def as_dict(self, g: StructureGraph) -> dict:
        def bn(b):
            return None if b is None else b.as_dict(g)

        return {
            "n": self.n,
            "edges": self.num_edges,
            "structural_rank": self.structural_rank,
            "deficiency": self.deficiency,
            "coverable": self.coverable,
            "cover": None if self.cover is None else [list(c) for c in self.cover.cycles],
            "forward_bottleneck": bn(self.forward_bottleneck),
            "backward_bottleneck": bn(self.backward_bottleneck),
            "numeric_rank": {
                "rank": self.numeric_rank,
                "trials": self.trials,
                "tolerance": self.tolerance,
            },
        }


def analyze(g: StructureGraph, cfg: RandomizedConfig) -> AnalysisReport:
    r = structural_rank(g)
    report = AnalysisReport(
        n=g.n,
        num_edges=g.num_edges,
        structural_rank=r,
        deficiency=g.n - r,
        coverable=r == g.n,
        cover=cycle_cover(g),
        forward_bottleneck=minimax_bottleneck(g),
        backward_bottleneck=backward_bottleneck(g),
        numeric_rank=generic_rank_numeric(pattern_of(g), cfg),
        trials=cfg.trials,
        tolerance=cfg.rank_rel_tol,
    )
    assert report.coverable == (report.deficiency == 0)
    assert (report.forward_bottleneck is not None) == (report.deficiency > 0)
    return report


def verify(g: StructureGraph, cfg: RandomizedConfig, points: int = 20) -> dict:
    """Cross-check the combinatorial results against the numerical ones.

    Returns a summary with one entry per check and an overall ``passed`` flag.
    """
    r = structural_rank(g)
    coverable = r == g.n
    checks = []

    def check(name, ok, **detail):
        checks.append({"check": name, "passed": bool(ok), **detail})

    r_num = generic_rank_numeric(pattern_of(g), cfg)
    check("rank_agreement", r == r_num, structural=r, numeric=r_num)

    nn_exact = null_nodes(g)
    nn_num = null_nodes_numeric(g, cfg)
    check(
        "null_node_agreement",
        nn_exact == nn_num,
        combinatorial=g.sorted_labels(nn_exact),
        numeric=g.sorted_labels(nn_num),
    )

    f = sample_function(g, cfg)
    lo, hi = jacobian_rank_sweep(f, points, cfg)
    check("jacobian_rank_sweep", lo == hi == r, min_rank=lo, max_rank=hi, points=points)

    x0 = random_point(g.n, cfg, trial=points)
    dim = manifold_dimension_at(f, x0, cfg)
    check("manifold_dimension", dim == g.n - r, dimension=dim, expected=g.n - r)

    if coverable:
        res = solve_from_anchor(f, x0, cfg)
        check(
            "anchored_newton",
            res.converged and float(np.max(np.abs(f.eval(res.x) - f.eval(x0)))) <= 1e-10,
            iterations=res.iterations,
        )

    mode = "coefficients" if coverable else "image"
    probe = probe_robustness(f, x0, 1e-3, cfg, mode=mode)
    expected = "RobustObserved" if coverable else "FragileObserved"
    check(
        "robustness_probe",
        probe.verdict.value == expected,
        verdict=probe.verdict.value,
        expected=expected,
        mode=mode,
        delta=1e-3,
    )
    return {
        "seed": cfg.seed,
        "trials": cfg.trials,
        "tolerance": cfg.rank_rel_tol,
        "structural_rank": r,
        "coverable": coverable,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


_FILL = {"bottle": "blue", "neck": "red", "both": "violet"}


def render_dot(g: StructureGraph, b: Bottleneck | None, name: str = "G") -> str:
    """Graphviz digraph; bottle nodes blue, neck nodes red, nodes in both violet."""
    bottle = b.bottle if b else frozenset()
    neck = b.neck if b else frozenset()
    lines = [f"digraph {_quote(name)} {{"]
    for label in g.nodes:
        role = None
        if label in bottle and label in neck:
            role = "both"
        elif label in bottle:
            role = "bottle"
        elif label in neck:
            role = "neck"
        attrs = f" [style=filled, fillcolor={_FILL[role]}]" if role else ""
        lines.append(f"  {_quote(label)}{attrs};")
    for src, dst in g.labelled_edges():
        lines.append(f"  {_quote(src)} -> {_quote(dst)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format_report(g: StructureGraph, report: AnalysisReport) -> str:
    def fmt(b):
        if b is None:
            return "none"
        d = b.as_dict(g)
        return f"bottle {{{', '.join(d['bottle'])}}} neck {{{', '.join(d['neck'])}}} m={d['deficiency']}"

    lines = [
        f"nodes: {report.n}",
        f"edges: {report.num_edges}",
        f"structural rank: {report.structural_rank}",
        f"numeric rank: {report.numeric_rank} ({report.trials} trials, tol {report.tolerance:g})",
        f"deficiency: {report.deficiency}",
        f"coverable: {'yes' if report.coverable else 'no'}",
        f"forward minimax bottleneck: {fmt(report.forward_bottleneck)}",
        f"backward minimax bottleneck: {fmt(report.backward_bottleneck)}",
    ]
    return "\n".join(lines) + "\n"
