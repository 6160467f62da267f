"""Structure graphs, occupancy patterns and structure-preserving rewrites.

An edge ``(j, i)`` means that equation ``i`` may depend on variable ``j``.
In the matrix picture this is the entry ``(i, j)`` of the structure matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

__all__ = [
    "GraphError",
    "StructureGraph",
    "StructurePattern",
    "parse_graph",
    "load_graph",
    "dump_graph",
    "pattern_of",
    "transpose",
    "expand_shared",
    "forward_set",
    "add_edges",
]


class GraphError(ValueError):
    """Raised for malformed graph documents or violated preconditions."""


@dataclass(frozen=True)
class StructureGraph:
    nodes: tuple[str, ...]
    edges: frozenset[tuple[int, int]]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, nodes: Iterable[str], edges: Iterable[tuple[int, int]]):
        nodes = tuple(nodes)
        edge_list = [(int(u), int(v)) for u, v in edges]
        if not nodes:
            raise GraphError("a graph needs at least one node")
        for label in nodes:
            if not isinstance(label, str) or not label:
                raise GraphError(f"node labels must be nonempty strings, got {label!r}")
        if len(set(nodes)) != len(nodes):
            dup = sorted({x for x in nodes if nodes.count(x) > 1})
            raise GraphError(f"duplicate node label(s): {', '.join(dup)}")
        n = len(nodes)
        for u, v in edge_list:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
        edge_set = frozenset(edge_list)
        if len(edge_set) != len(edge_list):
            raise GraphError("duplicate edge")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edge_set)
        object.__setattr__(self, "_index", {label: k for k, label in enumerate(nodes)})

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GraphError(f"unknown node label {label!r}") from None

    def indices(self, labels: Iterable[str]) -> set[int]:
        return {self.index(label) for label in labels}

    def labels(self, indices: Iterable[int]) -> frozenset[str]:
        return frozenset(self.nodes[k] for k in indices)

    def sorted_labels(self, labels: Iterable[str]) -> list[str]:
        """Labels in node (file) order."""
        return sorted(labels, key=self.index)

    def has_edge(self, src: str, dst: str) -> bool:
        return (self.index(src), self.index(dst)) in self.edges

    def successors(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in sorted(self.edges):
            out[u].append(v)
        return out

    def labelled_edges(self) -> list[tuple[str, str]]:
        return [(self.nodes[u], self.nodes[v]) for u, v in sorted(self.edges)]


@dataclass(frozen=True)
class StructurePattern:
    """Boolean M x N occupancy pattern; ``(i, j)`` in ``allowed`` may be nonzero."""

    rows: int
    cols: int
    allowed: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("pattern dimensions must be non-negative")
        allowed = frozenset((int(i), int(j)) for i, j in self.allowed)
        for i, j in allowed:
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValueError(f"position ({i}, {j}) outside {self.rows}x{self.cols}")
        object.__setattr__(self, "allowed", allowed)

    @property
    def nnz(self) -> int:
        return len(self.allowed)

    def row_adjacency(self) -> list[list[int]]:
        """Allowed columns of every row, ascending."""
        adj: list[list[int]] = [[] for _ in range(self.rows)]
        for i, j in sorted(self.allowed):
            adj[i].append(j)
        return adj

    def transposed(self) -> StructurePattern:
        return StructurePattern(self.cols, self.rows, frozenset((j, i) for i, j in self.allowed))

    def without_column(self, j: int) -> StructurePattern:
        """Same shape, column ``j`` emptied (its index stays valid)."""
        return StructurePattern(
            self.rows, self.cols, frozenset(p for p in self.allowed if p[1] != j)
        )

    def with_positions(self, positions: Iterable[tuple[int, int]]) -> StructurePattern:
        return StructurePattern(self.rows, self.cols, self.allowed | frozenset(positions))

    def to_dense(self):
        import numpy as np

        out = np.zeros((self.rows, self.cols), dtype=bool)
        for i, j in self.allowed:
            out[i, j] = True
        return out


def _edge_items(raw) -> list[tuple[str, str, bool]]:
    if not isinstance(raw, list):
        raise GraphError("'edges' must be a list")
    items = []
    for item in raw:
        if isinstance(item, list) and len(item) == 2:
            items.append((item[0], item[1], False))
        elif isinstance(item, dict) and "from" in item and "to" in item:
            bidir = item.get("bidir", False)
            if not isinstance(bidir, bool):
                raise GraphError(f"'bidir' must be a boolean in {item!r}")
            items.append((item["from"], item["to"], bidir))
        else:
            raise GraphError(f"cannot read edge {item!r}")
    return items


def parse_graph(text: str) -> StructureGraph:
    """Parse a graph document.

    ``{"nodes": [...], "edges": [[from, to] | {"from", "to", "bidir"}, ...]}``.
    A ``bidir`` edge expands to both directions; a bidirectional self-loop
    is a single loop.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict) or "nodes" not in doc:
        raise GraphError("graph document must be an object with a 'nodes' list")
    nodes = doc["nodes"]
    if not isinstance(nodes, list):
        raise GraphError("'nodes' must be a list")
    if len(set(map(str, nodes))) != len(nodes):
        raise GraphError("duplicate node label")
    index = {label: k for k, label in enumerate(nodes)}
    edges: list[tuple[int, int]] = []
    for src, dst, bidir in _edge_items(doc.get("edges", [])):
        for label in (src, dst):
            if label not in index:
                raise GraphError(f"edge refers to unknown node {label!r}")
        edges.append((index[src], index[dst]))
        if bidir and src != dst:
            edges.append((index[dst], index[src]))
    if len(set(edges)) != len(edges):
        seen, dups = set(), []
        for u, v in edges:
            if (u, v) in seen:
                dups.append(f"{nodes[u]}->{nodes[v]}")
            seen.add((u, v))
        raise GraphError(f"duplicate edge(s): {', '.join(dups)}")
    return StructureGraph(nodes, edges)


def load_graph(path) -> StructureGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def dump_graph(g: StructureGraph, pretty: bool = False) -> str:
    """Serialize as a graph document; ``pretty`` puts one edge per line."""
    nodes = json.dumps(list(g.nodes))
    edges = [json.dumps(list(e)) for e in g.labelled_edges()]
    if not pretty:
        return f'{{"nodes": {nodes}, "edges": [{", ".join(edges)}]}}'
    body = ",\n  ".join(edges)
    return f'{{\n "nodes": {nodes},\n "edges": [\n  {body}\n ]\n}}' if edges else (
        f'{{\n "nodes": {nodes},\n "edges": []\n}}'
    )


def pattern_of(g: StructureGraph) -> StructurePattern:
    return StructurePattern(g.n, g.n, frozenset((v, u) for u, v in g.edges))


def transpose(g: StructureGraph) -> StructureGraph:
    return StructureGraph(g.nodes, ((v, u) for u, v in g.edges))


def add_edges(g: StructureGraph, new_edges: Iterable[tuple[str, str]]) -> StructureGraph:
    extra = [(g.index(u), g.index(v)) for u, v in new_edges]
    return StructureGraph(g.nodes, list(g.edges) + extra)


def forward_set(g: StructureGraph, b: Iterable[str]) -> frozenset[str]:
    """Nodes reached by one edge out of ``b``."""
    src = g.indices(b)
    return g.labels(v for u, v in g.edges if u in src)


def expand_shared(
    g: StructureGraph, support: Iterable[str], targets: Iterable[str], new_label: str
) -> StructureGraph:
    """Replace a shared sub-expression by an explicit new variable.

    The new node receives edges from every support node, a self-loop, and
    feeds every target; the direct support -> target edges are removed.
    """
    support_idx = g.indices(support)
    target_idx = g.indices(targets)
    if not target_idx:
        raise GraphError("targets must be nonempty")
    if not new_label or new_label in g.nodes:
        raise GraphError(f"new label {new_label!r} is empty or already used")
    missing = [
        f"{g.nodes[s]}->{g.nodes[t]}"
        for t in sorted(target_idx)
        for s in sorted(support_idx)
        if (s, t) not in g.edges
    ]
    if missing:
        raise GraphError(f"targets do not depend on every support node: {', '.join(missing)}")
    new = g.n
    kept = [(u, v) for u, v in g.edges if not (u in support_idx and v in target_idx)]
    added = [(s, new) for s in sorted(support_idx)] + [(new, new)]
    added += [(new, t) for t in sorted(target_idx)]
    return StructureGraph(g.nodes + (new_label,), kept + added)
