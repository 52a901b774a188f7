"""Partial Cycle Cover and related cycle problems on graphs with a given
elimination forest, by counting consistent matching pairs."""

from .counter import CountingContext, compute_p, count_pairs, count_pairs_connected
from .graph import (
    EliminationForest,
    Graph,
    dfs_forest,
    optimal_forest,
    parse_forest,
    parse_graph,
    separator_forest,
    subdivide,
    validate_forest,
)
from .poly import CoeffRing, DegreeCaps, PolySpace, TruncPoly
from .solver import (
    PccInstance,
    SolverConfig,
    Verdict,
    solve_hamiltonian_cycle,
    solve_hamiltonian_path,
    solve_long_cycle,
    solve_long_path,
    solve_min_cycle_cover,
    solve_pcc,
)

__version__ = "0.1.0"
