"""Certificates and mechanical checks for the veto rules' guarantees:
domination-graph matchings, weighted fractional matchings, flow-based cost
bounds with their dual translation, and exact LP worst-case distortion.
"""

from .distortion import (
    DistortionResult,
    LPInternalError,
    distortion,
    worst_case_distortion,
)
from .domination import (
    DominationGraph,
    PQDominationGraph,
    domination_graph,
    fractional_perfect_matching,
    has_perfect_matching,
    is_fractional_perfect_matching,
    pq_domination_graph,
    verify_veto_matching,
)
from .flow import (
    DualReport,
    DualSolution,
    FlowAssignment,
    FlowCheck,
    FlowError,
    FlowNetwork,
    build_flow_network,
    construct_flow,
    dual_from_flow,
    format_flow,
    parse_flow,
    verify_flow,
)
from .matching import RationalMaxFlow, maximum_bipartite_matching
from .metric import Metric, metric_from_csv, metric_to_csv, social_cost
from .simplex import LPResult, LPStatus, linprog_max

__all__ = [
    "DistortionResult",
    "LPInternalError",
    "distortion",
    "worst_case_distortion",
    "DominationGraph",
    "PQDominationGraph",
    "domination_graph",
    "pq_domination_graph",
    "has_perfect_matching",
    "fractional_perfect_matching",
    "is_fractional_perfect_matching",
    "verify_veto_matching",
    "DualReport",
    "DualSolution",
    "FlowAssignment",
    "FlowCheck",
    "FlowError",
    "FlowNetwork",
    "build_flow_network",
    "construct_flow",
    "dual_from_flow",
    "format_flow",
    "parse_flow",
    "verify_flow",
    "RationalMaxFlow",
    "maximum_bipartite_matching",
    "Metric",
    "metric_from_csv",
    "metric_to_csv",
    "social_cost",
    "LPResult",
    "LPStatus",
    "linprog_max",
]
