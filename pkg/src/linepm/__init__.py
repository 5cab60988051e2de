"""Exact perfect-matching counts for line graphs of subcubic graphs."""
from .graph import MultiGraph, GraphError, degree, degree_census, is_connected, bridges
from .linegraph import line_graph, subdivide_all, clique_inserted, recognize_cubic_line_graph
from .counters import CountResult, count_brute, count_frontier, verify_power_of_two
from .reduction import reduce, validate_instance

__all__ = [
    "MultiGraph", "GraphError", "degree", "degree_census", "is_connected", "bridges",
    "line_graph", "subdivide_all", "clique_inserted", "recognize_cubic_line_graph",
    "CountResult", "count_brute", "count_frontier", "verify_power_of_two",
    "reduce", "validate_instance",
]

__version__ = "0.1.0"
