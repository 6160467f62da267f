from hypothesis import strategies as st

from structrobust.graph import StructureGraph


@st.composite
def graphs(draw, min_nodes=1, max_nodes=8):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(u, v) for u in range(n) for v in range(n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return StructureGraph([str(k + 1) for k in range(n)], edges)
