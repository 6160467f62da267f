"""Exact combinatorial analysis: structural rank, cycle covers, null nodes.

The structural (generic) rank of a pattern is the size of a maximum
matching between its rows and columns.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .graph import StructureGraph, StructurePattern, pattern_of

__all__ = [
    "Matching",
    "CycleCover",
    "max_matching",
    "structural_rank",
    "pattern_rank",
    "cycle_cover",
    "null_nodes",
    "alternating_closure",
]


@dataclass(frozen=True)
class Matching:
    """Row/column pairs of a pattern, no row or column used twice."""

    pairs: frozenset[tuple[int, int]]
    rows: int
    cols: int

    def __len__(self) -> int:
        return len(self.pairs)

    def row_mate(self) -> list[int]:
        mate = [-1] * self.rows
        for i, j in self.pairs:
            mate[i] = j
        return mate

    def col_mate(self) -> list[int]:
        mate = [-1] * self.cols
        for i, j in self.pairs:
            mate[j] = i
        return mate


@dataclass(frozen=True)
class CycleCover:
    cycles: tuple[tuple[str, ...], ...]

    def __len__(self) -> int:
        return len(self.cycles)

    def is_valid_for(self, g: StructureGraph) -> bool:
        seen: set[str] = set()
        for cyc in self.cycles:
            if not cyc or len(set(cyc)) != len(cyc) or seen & set(cyc):
                return False
            seen.update(cyc)
            for k, label in enumerate(cyc):
                if not g.has_edge(label, cyc[(k + 1) % len(cyc)]):
                    return False
        return seen == set(g.nodes)


def max_matching(p: StructurePattern) -> Matching:
    """Maximum-cardinality matching (Hopcroft-Karp).

    Free rows are processed in ascending order and candidate columns are
    tried in ascending order, so the result is a function of the pattern.
    """
    adj = p.row_adjacency()
    match_row = [-1] * p.rows
    match_col = [-1] * p.cols
    dead = -2

    while True:
        dist = [-1] * p.rows
        queue = deque()
        for r in range(p.rows):
            if match_row[r] == -1:
                dist[r] = 0
                queue.append(r)
        reachable_free = False
        while queue:
            r = queue.popleft()
            for c in adj[r]:
                r2 = match_col[c]
                if r2 == -1:
                    reachable_free = True
                elif dist[r2] == -1:
                    dist[r2] = dist[r] + 1
                    queue.append(r2)
        if not reachable_free:
            break

        cursor = [0] * p.rows
        for root in range(p.rows):
            if match_row[root] != -1 or dist[root] != 0:
                continue
            stack = [root]
            cols_on_path: list[int] = []
            while stack:
                r = stack[-1]
                moved = False
                while cursor[r] < len(adj[r]):
                    c = adj[r][cursor[r]]
                    cursor[r] += 1
                    r2 = match_col[c]
                    if r2 == -1:
                        cols_on_path.append(c)
                        for rr, cc in zip(stack, cols_on_path):
                            match_row[rr] = cc
                            match_col[cc] = rr
                        stack = []
                        moved = True
                        break
                    if dist[r2] == dist[r] + 1:
                        cols_on_path.append(c)
                        stack.append(r2)
                        moved = True
                        break
                if stack and not moved:
                    dist[r] = dead
                    stack.pop()
                    if cols_on_path:
                        cols_on_path.pop()

    pairs = frozenset((r, c) for r, c in enumerate(match_row) if c != -1)
    return Matching(pairs, p.rows, p.cols)


def pattern_rank(p: StructurePattern) -> int:
    return len(max_matching(p))


def structural_rank(g: StructureGraph) -> int:
    return pattern_rank(pattern_of(g))


def cycle_cover(g: StructureGraph) -> CycleCover | None:
    """Disjoint cycles through every node, or ``None`` if none exist.

    A perfect matching pairs row ``i`` with column ``j`` for an edge
    ``j -> i``; read as the successor map ``j -> i`` it is a permutation
    whose cycles form the cover. Several covers usually exist; this returns
    the one induced by :func:`max_matching`.
    """
    m = max_matching(pattern_of(g))
    if len(m) < g.n:
        return None
    succ = m.col_mate()
    seen = [False] * g.n
    cycles = []
    for start in range(g.n):
        if seen[start]:
            continue
        cyc = []
        k = start
        while not seen[k]:
            seen[k] = True
            cyc.append(g.nodes[k])
            k = succ[k]
        cycles.append(tuple(cyc))
    return CycleCover(tuple(cycles))


def null_nodes(g: StructureGraph) -> frozenset[str]:
    """Nodes whose coordinate is nonzero in a generic kernel vector.

    Column ``j`` carries a kernel coordinate exactly when it lies in the span
    of the other columns, i.e. when emptying it leaves the structural rank
    unchanged. Empty for full-rank graphs.
    """
    p = pattern_of(g)
    m = max_matching(p)
    r = len(m)
    if r == g.n:
        return frozenset()
    col_mate = m.col_mate()
    out = []
    for j in range(g.n):
        # an unmatched column cannot lower the rank when removed
        if col_mate[j] == -1 or pattern_rank(p.without_column(j)) == r:
            out.append(j)
    return g.labels(out)


def alternating_closure(
    p: StructurePattern, m: Matching, start_cols: Iterable[int]
) -> tuple[frozenset[int], frozenset[int]]:
    """Columns and rows reachable from ``start_cols`` by alternating paths.

    Moves go column -> row along any allowed entry and row -> column along
    the matching. Started from unmatched columns, every reached row is
    matched and the reached columns are the start columns plus the mates of
    the reached rows.
    """
    col_adj: list[list[int]] = [[] for _ in range(p.cols)]
    for i, j in sorted(p.allowed):
        col_adj[j].append(i)
    row_mate = m.row_mate()
    cols = set(start_cols)
    rows: set[int] = set()
    queue = deque(sorted(cols))
    while queue:
        c = queue.popleft()
        for r in col_adj[c]:
            if r in rows:
                continue
            rows.add(r)
            c2 = row_mate[r]
            if c2 != -1 and c2 not in cols:
                cols.add(c2)
                queue.append(c2)
    return frozenset(cols), frozenset(rows)
