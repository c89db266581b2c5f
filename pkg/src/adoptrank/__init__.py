"""adoptrank: find likely innovators and early adopters in social networks.

The package computes the Top Candidate expert ranking and seven
comparison centralities over an undirected social graph, runs linear
threshold / independent cascade diffusion, and evaluates every ranking
against ground-truth adoption days (adopter classes, group
interconnection, assortativity, top-k overlap, registration
statistics, reach).
"""

from .adoption import (
    AdopterClass,
    AdopterClassification,
    Assortativity,
    GroupMatrix,
    ReachReport,
    RegistrationStats,
    TopKSet,
    classify_adopters,
    interconnectedness,
    numeric_assortativity,
    overlap_matrix,
    reach_analysis,
    registration_stats,
    top_k,
)
from .centrality import (
    GDDParams,
    PageRankParams,
    ScoreVector,
    degree,
    gdd,
    gdd_rank,
    harmonic,
    k_core,
    ltc,
    pagerank,
    shapley_g1,
)
from .config import ALL_MEASURES, RunConfig, derive_seed, load_config
from .diffusion import (
    CascadeResult,
    ThresholdAssignment,
    ic_simulate,
    lt_simulate,
    thresholds_class_aware,
    thresholds_uniform_multiplier,
    thresholds_uniform_random,
    trivalency_probability,
    weighted_cascade_probability,
)
from .errors import (
    AdoptRankError,
    ConfigError,
    ConvergenceError,
    DataError,
    ParseError,
)
from .graph import (
    AdoptionFormat,
    AdoptionTable,
    EdgeListFormat,
    Graph,
    bfs_distances,
    load_adoption,
    load_edge_list,
    sample_nodes,
)
from .topcandidate import (
    ExpertSet,
    NominationRelation,
    TopCandidateRanking,
    build_nominations,
    stable_expert_set,
    top_candidate_ranking,
)

__version__ = "0.1.0"

__all__ = [
    "AdopterClass",
    "AdopterClassification",
    "AdoptionFormat",
    "AdoptionTable",
    "AdoptRankError",
    "ALL_MEASURES",
    "Assortativity",
    "CascadeResult",
    "ConfigError",
    "ConvergenceError",
    "DataError",
    "EdgeListFormat",
    "ExpertSet",
    "GDDParams",
    "Graph",
    "GroupMatrix",
    "NominationRelation",
    "PageRankParams",
    "ParseError",
    "ReachReport",
    "RegistrationStats",
    "RunConfig",
    "ScoreVector",
    "ThresholdAssignment",
    "TopCandidateRanking",
    "TopKSet",
    "bfs_distances",
    "build_nominations",
    "classify_adopters",
    "degree",
    "derive_seed",
    "gdd",
    "gdd_rank",
    "harmonic",
    "ic_simulate",
    "interconnectedness",
    "k_core",
    "load_adoption",
    "load_config",
    "load_edge_list",
    "lt_simulate",
    "ltc",
    "numeric_assortativity",
    "overlap_matrix",
    "pagerank",
    "reach_analysis",
    "registration_stats",
    "sample_nodes",
    "shapley_g1",
    "stable_expert_set",
    "thresholds_class_aware",
    "thresholds_uniform_multiplier",
    "thresholds_uniform_random",
    "top_candidate_ranking",
    "top_k",
    "trivalency_probability",
    "weighted_cascade_probability",
]
