"""Bottlenecks, deficiency witnesses and edge-addition repair."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graph import StructureGraph, add_edges, forward_set, pattern_of, transpose
from .structural import alternating_closure, max_matching, null_nodes, structural_rank

__all__ = [
    "Bottleneck",
    "RepairPlan",
    "check_bottleneck",
    "deficiency",
    "minimax_bottleneck",
    "backward_bottleneck",
    "bottleneck_exists",
    "single_edge_fixes",
    "repair",
]


@dataclass(frozen=True)
class Bottleneck:
    """A bottle ``B`` and its neck ``K``, the forward set of ``B``."""

    bottle: frozenset[str]
    neck: frozenset[str]

    @property
    def deficiency(self) -> int:
        return len(self.bottle) - len(self.neck)

    def as_dict(self, g: StructureGraph) -> dict:
        return {
            "bottle": g.sorted_labels(self.bottle),
            "neck": g.sorted_labels(self.neck),
            "deficiency": self.deficiency,
        }


@dataclass(frozen=True)
class RepairPlan:
    """Edges to add, in order, and the deficiency before and after each one."""

    additions: tuple[tuple[str, str], ...]
    trace: tuple[int, ...]


def deficiency(g: StructureGraph) -> int:
    return g.n - structural_rank(g)


def check_bottleneck(g: StructureGraph, bottle: Iterable[str]) -> Bottleneck:
    """Build the bottleneck of ``bottle``; raise ValueError unless |B| > |B->|."""
    bottle = frozenset(bottle)
    g.indices(bottle)
    if not bottle:
        raise ValueError("a bottle must be nonempty")
    b = Bottleneck(bottle, forward_set(g, bottle))
    if b.deficiency <= 0:
        raise ValueError(
            f"not a bottleneck: |B| = {len(b.bottle)}, |B->| = {len(b.neck)}"
        )
    return b


def minimax_bottleneck(g: StructureGraph) -> Bottleneck | None:
    """The bottleneck with the largest deficiency and smallest bottle.

    Its bottle is the set of null nodes; ``None`` when the graph has full
    structural rank.
    """
    bottle = null_nodes(g)
    if not bottle:
        return None
    return Bottleneck(bottle, forward_set(g, bottle))


def backward_bottleneck(g: StructureGraph) -> Bottleneck | None:
    """Equations that jointly depend on fewer variables than their number."""
    return minimax_bottleneck(transpose(g))


def bottleneck_exists(g: StructureGraph, m: int) -> tuple[bool, Bottleneck | None]:
    """Whether an ``m``-bottleneck exists, with a witness when it does.

    A witness for ``m <= m*`` is grown from ``m`` columns left unmatched by a
    maximum matching: the columns reachable by alternating paths form a bottle
    whose neck is exactly the reached rows, all matched into the bottle, so
    the deficiency is ``m``. Using every unmatched column gives the minimax
    bottle.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    p = pattern_of(g)
    matching = max_matching(p)
    m_star = g.n - len(matching)
    if m > m_star:
        return False, None
    col_mate = matching.col_mate()
    free_cols = [j for j in range(g.n) if col_mate[j] == -1]
    cols, rows = alternating_closure(p, matching, free_cols[:m])
    witness = Bottleneck(g.labels(cols), g.labels(rows))
    assert witness.neck == forward_set(g, witness.bottle)
    assert witness.deficiency == m
    return True, witness


def single_edge_fixes(g: StructureGraph) -> tuple[tuple[str, str], ...]:
    """New edges that each lower the deficiency by exactly one.

    Candidates run from a bottle node to a node outside the neck; each is
    kept only if adding it raises the structural rank. A candidate whose
    target lies outside the backward bottle does not help, so the result is
    usually smaller than the full candidate set.
    """
    r = structural_rank(g)
    if r == g.n:
        raise ValueError("graph is already cycle coverable; nothing to fix")
    b = minimax_bottleneck(g)
    fixes = []
    for u in g.sorted_labels(b.bottle):
        for v in g.nodes:
            if v in b.neck or g.has_edge(u, v):
                continue
            if structural_rank(add_edges(g, [(u, v)])) == r + 1:
                fixes.append((u, v))
    return tuple(fixes)


def repair(g: StructureGraph) -> RepairPlan:
    """Greedily add the first verified fix until the graph is coverable.

    Ties are broken by node order of the source, then of the target.
    """
    additions = []
    trace = [deficiency(g)]
    current = g
    while trace[-1] > 0:
        edge = single_edge_fixes(current)[0]
        current = add_edges(current, [edge])
        additions.append(edge)
        trace.append(deficiency(current))
        if trace[-1] != trace[-2] - 1:
            raise RuntimeError(f"edge {edge} did not lower the deficiency")
    return RepairPlan(tuple(additions), tuple(trace))
