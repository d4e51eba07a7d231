"""cuckoopeel: cuckoo hashing, eviction processes and hypergraph peeling.

A library and CLI for k-ary cuckoo hash tables with random-walk insertion,
the random eviction process with pluggable schedulers, 2-core peeling of
random k-uniform hypergraphs with dependence-graph analytics, and the
continuous-time peeling process with its closed-form limits and threshold
constants.  Hot kernels run in a compiled extension when available, with a
bit-identical pure-Python fallback selected at import time.
"""

from ._backend import backend_name
from .analysis import (
    PeelTrajectory,
    ThresholdResult,
    ball_density_limit,
    heavy_balls_vanished,
    heavy_density_limit,
    light_heavy_profile,
    peeling_threshold,
    reference_thresholds,
    simulate_continuous_peeling,
    simulate_pure_death,
    smallest_heavy_bounded_t0,
)
from .cuckoo import (
    BulkInsertSummary,
    CuckooTable,
    InsertOutcome,
    bulk_insert_experiment,
    default_move_cap,
)
from .errors import DuplicateKeyError, InstanceTooLargeError, InvalidParameterError
from .eviction import (
    POLICIES,
    EvictionRun,
    MoveTrace,
    Policy,
    default_round_cap,
    estimate_move_bound,
    run_parallel_insertion_sim,
    run_rep,
    run_rep_prime,
)
from .hypergraph import (
    Hypergraph,
    degree_sequence,
    from_explicit,
    sample_hypergraph,
)
from .peeling import (
    PathCount,
    Peeling,
    PeelReport,
    TwoCore,
    VertexDependenceGraph,
    brute_force_path_count,
    build_vertex_dependence_graph,
    count_paths,
    direct_dependents,
    is_valid_partial_orientation,
    is_valid_peeling,
    peel,
    peeling_numbers,
    two_core,
    vertex_peeling_numbers,
)
from .rng import SplitMix64, derive_seed

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    "SplitMix64",
    "derive_seed",
    "Hypergraph",
    "sample_hypergraph",
    "from_explicit",
    "degree_sequence",
    "Peeling",
    "TwoCore",
    "PeelReport",
    "PathCount",
    "VertexDependenceGraph",
    "peel",
    "two_core",
    "direct_dependents",
    "build_vertex_dependence_graph",
    "peeling_numbers",
    "vertex_peeling_numbers",
    "count_paths",
    "brute_force_path_count",
    "is_valid_peeling",
    "is_valid_partial_orientation",
    "CuckooTable",
    "InsertOutcome",
    "BulkInsertSummary",
    "bulk_insert_experiment",
    "default_move_cap",
    "Policy",
    "POLICIES",
    "MoveTrace",
    "EvictionRun",
    "run_rep",
    "run_rep_prime",
    "run_parallel_insertion_sim",
    "estimate_move_bound",
    "default_round_cap",
    "ball_density_limit",
    "heavy_density_limit",
    "ThresholdResult",
    "peeling_threshold",
    "reference_thresholds",
    "PeelTrajectory",
    "simulate_continuous_peeling",
    "simulate_pure_death",
    "light_heavy_profile",
    "smallest_heavy_bounded_t0",
    "heavy_balls_vanished",
    "InvalidParameterError",
    "DuplicateKeyError",
    "InstanceTooLargeError",
]
