"""Structural robustness of systems of N equations in N unknowns.

Decides from the dependence graph alone whether robust solutions can exist:
generic rank, cycle covers, null nodes, minimax bottlenecks and repairs,
plus numerical and nonlinear cross-checks.
"""

__version__ = "0.1.0"

from .graph import (
    GraphError,
    StructureGraph,
    StructurePattern,
    dump_graph,
    expand_shared,
    forward_set,
    load_graph,
    parse_graph,
    pattern_of,
    transpose,
)
from .structural import CycleCover, Matching, cycle_cover, max_matching, null_nodes, structural_rank
from .numeric import RandomizedConfig, generic_rank_numeric, null_nodes_numeric
from .bottleneck import (
    Bottleneck,
    RepairPlan,
    backward_bottleneck,
    bottleneck_exists,
    minimax_bottleneck,
    repair,
    single_edge_fixes,
)
from .report import AnalysisReport, analyze
