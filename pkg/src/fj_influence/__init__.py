"""Influence analysis for two competing stubborn agents on a directed network.

Opinion updates mix neighbor opinions with each agent's anchor opinion; at
steady state only the stubborn agents hold influence. This package computes
their influence shares two independent ways (dense solve and flow-graph
reduction), layers the graph around an index node, and classifies
constant-in-degree edge rewirings by whether they can move those shares.
"""

from ._kernels import USING_NUMBA
from .dynamics import (
    InfluenceResult,
    OpinionState,
    analyze,
    average_final_opinion,
    fj_step,
    influence_centrality,
    influence_matrix,
    iterate_to_steady,
    steady_state,
)
from .generators import candidate_modifications, random_network, sample_classified_pairs
from .graph import (
    CycleReport,
    Network,
    eligible_index_nodes,
    enumerate_cycles,
    is_strongly_connected,
    load_network,
    network_from_dict,
    network_to_dict,
    normalize_rows,
    save_network,
    validate_network,
)
from .levels import (
    LevelAssignment,
    assign_levels,
    classify_region,
    direct_path_gain_sum,
    has_direct_path,
)
from .modifications import (
    Candidate,
    Classification,
    EdgeModification,
    Verdict,
    VerificationReport,
    apply_modification,
    classify,
    enumerate_modifications,
    is_permissible,
    verify_empirically,
)
from .sfg import (
    SINK,
    ReducedSFG,
    SignalFlowGraph,
    build_sfg,
    fold_self_loops,
    graph_cycle_free,
    index_residue_reduce,
    reduced_gain,
    residual_paths,
    split_node,
    src,
)
from .tolerances import DEFAULT, Tolerances, load_tolerances

__version__ = "0.1.0"

__all__ = [
    "USING_NUMBA",
    "CycleReport",
    "Network",
    "OpinionState",
    "InfluenceResult",
    "SignalFlowGraph",
    "ReducedSFG",
    "LevelAssignment",
    "EdgeModification",
    "Classification",
    "Candidate",
    "Verdict",
    "VerificationReport",
    "Tolerances",
    "DEFAULT",
    "SINK",
    "analyze",
    "apply_modification",
    "assign_levels",
    "average_final_opinion",
    "build_sfg",
    "candidate_modifications",
    "classify",
    "classify_region",
    "direct_path_gain_sum",
    "eligible_index_nodes",
    "enumerate_cycles",
    "enumerate_modifications",
    "fj_step",
    "fold_self_loops",
    "graph_cycle_free",
    "has_direct_path",
    "influence_centrality",
    "influence_matrix",
    "index_residue_reduce",
    "is_permissible",
    "is_strongly_connected",
    "iterate_to_steady",
    "load_network",
    "load_tolerances",
    "network_from_dict",
    "network_to_dict",
    "normalize_rows",
    "random_network",
    "reduced_gain",
    "residual_paths",
    "sample_classified_pairs",
    "save_network",
    "split_node",
    "src",
    "steady_state",
    "validate_network",
    "verify_empirically",
]
