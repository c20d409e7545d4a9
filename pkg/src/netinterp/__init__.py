"""Random edit interpolation between snapshots of an evolving network."""

from .chain import (
    DistanceChain,
    approx_limiting_distribution,
    empirical_hitting_time,
    exact_limiting_distribution,
    expected_hitting_time,
    fit_rate,
    layer_uniformity_oracle,
)
from .generators import SbmSpec, erdos_renyi, planted_sbm, sbm
from .graph import Graph, GraphMismatchError, edit_distance, max_edit_distance
from .interpolate import AdvancingProbability, InterpolationConfig, Trace, interpolate, interpolate_sequence
from .ledger import MoveLedger, SignedEdge
from .stats import ClusteringCounter, global_clustering, mean_clustering, stats_along_trace

__version__ = "0.1.0"

__all__ = [
    "AdvancingProbability",
    "ClusteringCounter",
    "DistanceChain",
    "Graph",
    "GraphMismatchError",
    "InterpolationConfig",
    "MoveLedger",
    "SbmSpec",
    "SignedEdge",
    "Trace",
    "approx_limiting_distribution",
    "edit_distance",
    "empirical_hitting_time",
    "erdos_renyi",
    "exact_limiting_distribution",
    "expected_hitting_time",
    "fit_rate",
    "global_clustering",
    "interpolate",
    "interpolate_sequence",
    "layer_uniformity_oracle",
    "max_edit_distance",
    "mean_clustering",
    "planted_sbm",
    "sbm",
    "stats_along_trace",
]
