"""Estimate the number of communities in a stochastic block model.

The package scores candidate community counts with penalized
normalized-likelihood criteria over plug-in labels from adjacency spectral
clustering, and ships a sampler, brute-force tiny-instance oracles, and a
CLI for estimation, simulation sweeps, and benchmarking.
"""

from .criteria import (
    METHODS,
    CriterionScore,
    PenaltyConfig,
    cond_loglik_sup,
    label_loglik_sup,
    log_dnml,
    log_integrated_lik,
    log_multinomial_complexity,
    pen_dnml,
    pen_nml,
    score,
)
from .graph import (
    BlockStats,
    Graph,
    Labeling,
    block_stats,
    load_adjacency_csv,
    load_edge_list,
)
from .sampler import (
    SBMParams,
    derive_seed,
    planted_partition,
    sample_graph,
    sample_labels,
    sample_sbm,
)
from .selector import KRecord, SelectionResult, select_k
from .spectral import DetectorConfig, kmeans, leading_eigenvectors, spectral_cluster

__version__ = "0.1.0"

__all__ = [
    "METHODS",
    "BlockStats",
    "CriterionScore",
    "DetectorConfig",
    "Graph",
    "KRecord",
    "Labeling",
    "PenaltyConfig",
    "SBMParams",
    "SelectionResult",
    "block_stats",
    "cond_loglik_sup",
    "derive_seed",
    "kmeans",
    "label_loglik_sup",
    "leading_eigenvectors",
    "load_adjacency_csv",
    "load_edge_list",
    "log_dnml",
    "log_integrated_lik",
    "log_multinomial_complexity",
    "pen_dnml",
    "pen_nml",
    "planted_partition",
    "sample_graph",
    "sample_labels",
    "sample_sbm",
    "score",
    "select_k",
    "spectral_cluster",
    "__version__",
]
