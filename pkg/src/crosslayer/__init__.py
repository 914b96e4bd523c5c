"""Cross-layer reliability of layered (IP-over-WDM style) networks.

A logical topology is carried over a physical topology by a lightpath
routing. This package counts the physical failure sets that disconnect the
logical network, compares routings through their cut vectors, and improves
routings by rerouting, augmentation, and spanning-tree-aware design.
"""

from __future__ import annotations

from .errors import CrossLayerError, EnumerationLimitError, InfeasibleError, ModelError, ScenarioError
from .model import (
    LayeredNetwork,
    LightpathRouting,
    LogicalTopology,
    NetworkState,
    PhysicalPath,
    PhysicalTopology,
    ResidualGraph,
    component_count,
    critical_links,
    is_cross_layer_cut,
    is_two_way_cut,
    residual_graph,
    separates,
)
from .reliability import (
    CutVector,
    FailurePolynomial,
    MonteCarloEstimate,
    SpanningTreeStats,
    cut_vector,
    failure_probability,
    mclc,
    mclst,
    monte_carlo_failure,
)

__version__ = "0.1.0"

__all__ = [
    "CrossLayerError",
    "EnumerationLimitError",
    "InfeasibleError",
    "ModelError",
    "ScenarioError",
    "LayeredNetwork",
    "LightpathRouting",
    "LogicalTopology",
    "NetworkState",
    "PhysicalPath",
    "PhysicalTopology",
    "ResidualGraph",
    "component_count",
    "critical_links",
    "is_cross_layer_cut",
    "is_two_way_cut",
    "residual_graph",
    "separates",
    "CutVector",
    "FailurePolynomial",
    "MonteCarloEstimate",
    "SpanningTreeStats",
    "cut_vector",
    "failure_probability",
    "mclc",
    "mclst",
    "monte_carlo_failure",
]
