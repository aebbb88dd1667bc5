"""Analysis toolkit for deterministic binary majority dynamics on graphs."""

__version__ = "0.1.0"

from .graph import Graph, GraphBundle, GraphError, ParseError, generate, read_graph, write_graph
from .dynamics import Trajectory, BudgetExceeded, run, step, voting_time
from .potential import (
    ArrowSet,
    bad_arrows,
    bound_E,
    bound_badarrows,
    bound_half_E,
    bound_two_E,
    with_self_loops,
)
from .symmetry import asymmetric_graph, bound_asym, families
from .search import exact_worst_case, sampled_worst_case, serpentine_opinions
from .reduction import CnfFormula, build_reduction, parse_cnf, verify_satisfiable_direction

__all__ = [
    "ArrowSet",
    "BudgetExceeded",
    "CnfFormula",
    "Graph",
    "GraphBundle",
    "GraphError",
    "ParseError",
    "Trajectory",
    "asymmetric_graph",
    "bad_arrows",
    "bound_E",
    "bound_asym",
    "bound_badarrows",
    "bound_half_E",
    "bound_two_E",
    "build_reduction",
    "exact_worst_case",
    "families",
    "generate",
    "parse_cnf",
    "read_graph",
    "run",
    "sampled_worst_case",
    "serpentine_opinions",
    "step",
    "verify_satisfiable_direction",
    "voting_time",
    "with_self_loops",
    "write_graph",
]
