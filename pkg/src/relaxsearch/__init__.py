"""A* over relaxation hierarchies, with exact node-expansion accounting."""
from .core import (
    ExpansionLedger,
    LimitExceeded,
    NoGoalReachable,
    OracleMissing,
    ReopenDetected,
    SearchError,
    SearchOutcome,
    TieBreak,
    astar,
    uniform_cost_map,
    verify_heuristic_properties,
)
from .relax import (
    HeuristicKind,
    HierarchySpec,
    constant_heuristic,
    hierarchical_astar,
    make_search_heuristic,
)

__all__ = [
    "ExpansionLedger",
    "HeuristicKind",
    "HierarchySpec",
    "LimitExceeded",
    "NoGoalReachable",
    "OracleMissing",
    "ReopenDetected",
    "SearchError",
    "SearchOutcome",
    "TieBreak",
    "astar",
    "constant_heuristic",
    "hierarchical_astar",
    "make_search_heuristic",
    "uniform_cost_map",
    "verify_heuristic_properties",
]
