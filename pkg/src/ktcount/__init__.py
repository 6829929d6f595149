"""Counting labeled graphs of bounded treewidth and proper-pathwidth.

Exact solvers, the constructible-triple construction, brute-force censuses
and certified evaluations of the counting bounds.
"""

from .bounds import (
    Interval,
    bound_report,
    choose_block_size,
    lb_eq3,
    lb_eq4,
    lb_eq8,
    lb_eq9,
    lb_thm2,
    ppw_ub_constant,
    preimage_bound,
    proper_linear_count,
    ub_eq1,
    ub_eq2,
    verify_sandwich,
)
from .census import (
    apex_forest_count,
    census_ktrees,
    census_proper_linear_ktrees,
    census_T,
    forest_count,
    ktree_formula,
    treewidth_histogram,
)
from .construction import (
    ConstructibleTriple,
    audit_cell,
    build_graph,
    compute_D_sets,
    count_preimages,
    count_triples,
    distinct_graphs,
    enumerate_triples,
    grid_row,
    ppd_witness,
    reconstruct_blocks,
    sample_triple,
    triple_count_lower_bound,
    validate_triple,
)
from .errors import (
    CapacityError,
    ConsistencyError,
    DomainError,
    Graph6Error,
    KtcError,
    ReconstructionError,
    TripleValidationError,
)
from .graph import LabeledGraph, from_graph6, graph_from_index, index_of_graph, to_graph6
from .widths import (
    ProperPathDecomposition,
    check_ppd,
    is_partial_ktree,
    pathwidth_exact,
    proper_path_decomposition,
    proper_pathwidth_exact,
    treewidth_exact,
    width_report,
)

__version__ = "0.1.0"
