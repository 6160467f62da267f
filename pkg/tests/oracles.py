"""Brute-force reference computations, independent of the library algorithms."""

import itertools
from functools import lru_cache

import numpy as np

from structrobust.graph import StructureGraph


@lru_cache(maxsize=None)
def _perms(n):
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


def dense_pattern(g: StructureGraph) -> np.ndarray:
    s = np.zeros((g.n, g.n), dtype=bool)
    for u, v in g.edges:
        s[v, u] = True
    return s


def brute_rank(g: StructureGraph) -> int:
    """Largest number of allowed entries on any permutation diagonal."""
    s = dense_pattern(g)
    perms = _perms(g.n)
    return int(s[np.arange(g.n), perms].sum(axis=1).max())


def brute_cover_exists(g: StructureGraph) -> bool:
    """Some permutation uses only edges, i.e. its cycles cover the graph."""
    s = dense_pattern(g)
    perms = _perms(g.n)
    return bool(s[np.arange(g.n), perms].all(axis=1).any())


def subset_deficiencies(g: StructureGraph):
    """``{bitmask of B: |B| - |B->|}`` over every nonempty node subset."""
    out_mask = [0] * g.n
    for u, v in g.edges:
        out_mask[u] |= 1 << v
    fwd = [0] * (1 << g.n)
    result = {}
    for mask in range(1, 1 << g.n):
        low = mask & -mask
        k = low.bit_length() - 1
        fwd[mask] = fwd[mask ^ low] | out_mask[k]
        result[mask] = bin(mask).count("1") - bin(fwd[mask]).count("1")
    return result


def brute_minimax(g: StructureGraph):
    """(max deficiency, list of smallest bottles attaining it) by enumeration."""
    table = subset_deficiencies(g)
    best = max(table.values())
    if best <= 0:
        return best, []
    size = min(bin(m).count("1") for m, d in table.items() if d == best)
    bottles = [
        frozenset(g.nodes[k] for k in range(g.n) if m >> k & 1)
        for m, d in table.items()
        if d == best and bin(m).count("1") == size
    ]
    return best, bottles


def random_graph(rng: np.random.Generator, n: int, p: float) -> StructureGraph:
    edges = [(u, v) for u in range(n) for v in range(n) if rng.random() < p]
    return StructureGraph([str(k + 1) for k in range(n)], edges)


def layered_graph(profile) -> StructureGraph:
    """Complete bidirectional edges between adjacent layers only."""
    layers, nodes = [], []
    for level, count in enumerate(profile, start=1):
        layers.append([f"L{level}.{k}" for k in range(1, count + 1)])
        nodes += layers[-1]
    index = {x: i for i, x in enumerate(nodes)}
    edges = []
    for lower, upper in zip(layers, layers[1:]):
        for x in lower:
            for y in upper:
                edges += [(index[x], index[y]), (index[y], index[x])]
    return StructureGraph(nodes, edges)


def central_difference_jacobian(f, x, h=1e-5):
    n = len(x)
    out = np.zeros((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        out[:, j] = (f(x + e) - f(x - e)) / (2 * h)
    return out
