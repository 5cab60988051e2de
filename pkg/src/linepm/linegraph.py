"""Line graphs, full subdivisions and clique-inserted graphs.

The line graph here is multiplicity-aware: two edges that share both
endpoints (parallel edges) become two vertices joined by two parallel
edges.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Tuple, Union

from .graph import GraphError, MultiGraph, degrees, is_connected


@dataclass(frozen=True)
class LineGraphResult:
    graph: MultiGraph
    origin_edge: Tuple[int, ...]   # vertex of L(G) -> edge id of G


def line_graph(g: MultiGraph) -> LineGraphResult:
    # one L-edge per (shared endpoint, pair of edges at it): a pair sharing
    # both endpoints is emitted twice, once from each end
    edges = []
    for v in range(g.num_vertices):
        inc = sorted(e for _, e in g.incident(v))
        for a, b in combinations(inc, 2):
            edges.append((a, b))
    edges.sort()
    lg = MultiGraph(g.num_edges, tuple(edges))
    return LineGraphResult(lg, tuple(range(g.num_edges)))


def subdivide_all(g: MultiGraph) -> MultiGraph:
    """Insert one new vertex on every edge.  Edge ``i`` becomes edges ``2i, 2i+1``
    through vertex ``num_vertices + i``."""
    n = g.num_vertices
    edges = []
    for i, (u, v) in enumerate(g.edges):
        x = n + i
        edges.append((u, x))
        edges.append((x, v))
    return MultiGraph(n + g.num_edges, tuple(edges))


def is_cubic(g: MultiGraph) -> bool:
    return all(d == 3 for d in degrees(g))


def clique_inserted(g: MultiGraph) -> MultiGraph:
    """L(S(g)): every vertex of a cubic graph replaced by a triangle."""
    if not is_cubic(g):
        raise GraphError("clique_inserted needs a cubic graph")
    return line_graph(subdivide_all(g)).graph


@dataclass(frozen=True)
class IsK4:
    pass


@dataclass(frozen=True)
class CliqueInserted:
    preimage: MultiGraph
    triangles: Tuple[Tuple[int, int, int], ...]


@dataclass(frozen=True)
class NotALineGraph:
    reason: str


Recognition = Union[IsK4, CliqueInserted, NotALineGraph]


def _triangles_at(g: MultiGraph, adj: List[set]) -> List[List[Tuple[int, int, int]]]:
    per_vertex: List[List[Tuple[int, int, int]]] = [[] for _ in range(g.num_vertices)]
    for v in range(g.num_vertices):
        for a, b in combinations(sorted(adj[v]), 2):
            if b in adj[a]:
                per_vertex[v].append(tuple(sorted((v, a, b))))
    return per_vertex


def recognize_cubic_line_graph(g: MultiGraph) -> Recognition:
    """Classify a connected simple cubic graph.

    A cubic line graph other than K4 is L(S(H)) for a cubic H; in such a
    graph every vertex lies in exactly one triangle (S(H) has none), so
    the triangle partition is forced and unique.  Contracting each
    triangle gives H, possibly with parallel edges.
    """
    if not is_cubic(g):
        raise GraphError("recognition needs a cubic graph")
    if not is_connected(g):
        raise GraphError("recognition needs a connected graph")
    if not g.is_simple():
        raise GraphError("recognition needs a simple graph")
    if g.num_vertices == 4:
        return IsK4()   # the only simple cubic graph on 4 vertices

    adj = [set(g.neighbors(v)) for v in range(g.num_vertices)]
    per_vertex = _triangles_at(g, adj)
    for v, tris in enumerate(per_vertex):
        if len(tris) != 1:
            return NotALineGraph(f"vertex {v} lies in {len(tris)} triangles")
    triangles = sorted(set(t[0] for t in per_vertex))
    owner: Dict[int, int] = {}
    for k, tri in enumerate(triangles):
        for v in tri:
            assert v not in owner, "triangle partition is not unique"
            owner[v] = k

    pre_edges = []
    for u, v in g.edges:
        a, b = owner[u], owner[v]
        if a != b:
            pre_edges.append((a, b))
    pre = MultiGraph(len(triangles), tuple(pre_edges))
    if not is_cubic(pre):
        return NotALineGraph("contracted graph is not cubic")
    return CliqueInserted(pre, tuple(triangles))
