"""Rewrites that preserve M(G) or M(L(G)).

Every rewrite returns a :class:`Rewrite` holding the new graph plus
old -> new vertex and edge maps, so callers can follow distinguished
vertices and edges through a sequence of steps.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Tuple

from .graph import GraphError, MultiGraph, degree


class TransformError(GraphError):
    """A rewrite was asked for at a site that violates its precondition."""


@dataclass(frozen=True)
class Rewrite:
    graph: MultiGraph
    vertex_map: Dict[int, int]
    edge_map: Dict[int, int]
    new_vertices: Tuple[int, ...] = ()
    new_edges: Tuple[int, ...] = ()


def _rebuild(
    g: MultiGraph,
    drop_vertices: Iterable[int] = (),
    drop_edges: Iterable[int] = (),
    n_fresh: int = 0,
    add_edges: Iterable[Tuple[object, object]] = (),
) -> Rewrite:
    """Delete vertices/edges, append ``n_fresh`` vertices and extra edges.

    Endpoints in ``add_edges`` are old vertex ids (ints) or ``("new", k)``
    for the k-th fresh vertex.
    """
    dv = set(drop_vertices)
    de = set(drop_edges)
    vmap: Dict[int, int] = {}
    for v in range(g.num_vertices):
        if v not in dv:
            vmap[v] = len(vmap)
    fresh = [len(vmap) + k for k in range(n_fresh)]

    def res(x: object) -> int:
        if isinstance(x, tuple):
            return fresh[x[1]]
        return vmap[x]

    emap: Dict[int, int] = {}
    edges = []
    for i, (u, v) in enumerate(g.edges):
        if i in de or u in dv or v in dv:
            continue
        emap[i] = len(edges)
        edges.append((vmap[u], vmap[v]))
    new_edges = []
    for a, b in add_edges:
        new_edges.append(len(edges))
        edges.append((res(a), res(b)))
    h = MultiGraph(len(vmap) + n_fresh, tuple(edges))
    return Rewrite(h, vmap, emap, tuple(fresh), tuple(new_edges))


def _new(k: int) -> Tuple[str, int]:
    return ("new", k)


# --- vertex splitting ------------------------------------------------------

@dataclass(frozen=True)
class SplitSpec:
    vertex: int
    partition_x: FrozenSet[int]
    partition_y: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "partition_x", frozenset(self.partition_x))
        object.__setattr__(self, "partition_y", frozenset(self.partition_y))


def split_vertex(g: MultiGraph, spec: SplitSpec) -> Rewrite:
    """Replace ``u`` by ``u' - x - u''``; X-edges move to u', Y-edges to u''.

    Fresh ids are assigned in the order u', u'', x.
    """
    u = spec.vertex
    incident = {e for _, e in g.incident(u)}
    x_side, y_side = spec.partition_x, spec.partition_y
    if x_side & y_side:
        raise TransformError(f"split of {u}: edges {sorted(x_side & y_side)} on both sides")
    if x_side | y_side != incident:
        raise TransformError(
            f"split of {u}: partition {sorted(x_side | y_side)} does not match "
            f"incident edges {sorted(incident)}"
        )
    add: List[Tuple[object, object]] = [(_new(2), _new(0)), (_new(2), _new(1))]
    for e in sorted(incident):
        side = _new(0) if e in x_side else _new(1)
        add.append((side, g.other_end(e, u)))
    return _rebuild(g, drop_vertices=[u], n_fresh=3, add_edges=add)


# --- subdivision -----------------------------------------------------------

def subdivide_edge(g: MultiGraph, e: int, times: int) -> Rewrite:
    """Replace edge ``e = (u, v)`` by a path ``u - w1 - ... - w_times - v``."""
    if not (0 <= e < g.num_edges):
        raise TransformError(f"edge {e} out of range for {g.num_edges} edges")
    if times < 0:
        raise TransformError("times must be non-negative")
    if times == 0:
        ident = {i: i for i in range(g.num_edges)}
        return Rewrite(g, {v: v for v in range(g.num_vertices)}, ident)
    u, v = g.edges[e]
    chain: List[object] = [u] + [_new(k) for k in range(times)] + [v]
    add = list(zip(chain, chain[1:]))
    return _rebuild(g, drop_edges=[e], n_fresh=times, add_edges=add)


# --- pendant rules ---------------------------------------------------------

def _pendant_site(g: MultiGraph, u: int) -> Tuple[int, int, List[int]]:
    """For pendant ``u`` return (its edge, its neighbor v, v's other edge ids)."""
    if degree(g, u) != 1:
        raise TransformError(f"vertex {u} has degree {degree(g, u)}, expected 1")
    (v, e), = g.incident(u)
    if degree(g, v) != 3:
        raise TransformError(f"neighbor {v} of pendant {u} has degree {degree(g, v)}, expected 3")
    others = [f for _, f in g.incident(v) if f != e]
    return e, v, others


def pendant_reduce(g: MultiGraph, u: int) -> Rewrite:
    """Delete pendant ``u`` and its neighbor ``v``; join v's other two neighbors."""
    _, v, others = _pendant_site(g, u)
    v1, v2 = (g.other_end(f, v) for f in others)
    if v1 == v2:
        raise TransformError(
            f"the two other edges at {v} are parallel (both to {v1}); "
            "apply multi_pendant_fix first"
        )
    return _rebuild(g, drop_vertices=[u, v], add_edges=[(v1, v2)])


def multi_pendant_fix(g: MultiGraph, u: int) -> Rewrite:
    """Subdivide twice each of the two parallel edges at the pendant's neighbor."""
    _, v, others = _pendant_site(g, u)
    v1, v2 = (g.other_end(f, v) for f in others)
    if v1 != v2:
        raise TransformError(f"the two other edges at {v} are not parallel")
    f1, f2 = others
    # v - w0 - w1 - v1  and  v - w2 - w3 - v1
    add = [(v, _new(0)), (_new(0), _new(1)), (_new(1), v1),
           (v, _new(2)), (_new(2), _new(3)), (_new(3), v1)]
    return _rebuild(g, drop_edges=[f1, f2], n_fresh=4, add_edges=add)


def strip_forced_pendant(g: MultiGraph, u: int) -> Rewrite:
    """Delete pendant ``u`` and its degree-2 neighbor ``x``.

    In L(G) the edge ``u-x`` is a degree-1 vertex whose only neighbor is
    the other edge at ``x``, so that pair is in every perfect matching and
    M(L(G)) = M(L(G - u - x)).
    """
    if degree(g, u) != 1:
        raise TransformError(f"vertex {u} has degree {degree(g, u)}, expected 1")
    (x, _), = g.incident(u)
    if degree(g, x) != 2:
        raise TransformError(f"neighbor {x} of pendant {u} has degree {degree(g, x)}, expected 2")
    return _rebuild(g, drop_vertices=[u, x])


@dataclass
class PendantLog:
    rule: str           # "Claim1", "MultiPendantFix" or "ForcedPendant"
    vertex: int
    before: MultiGraph
    after: MultiGraph


def exhaust_pendants(
    g: MultiGraph, strip_forced: bool = False
) -> Tuple[MultiGraph, List[PendantLog]]:
    """Apply pendant rules at the lowest-id pendant until none applies.

    Every rule preserves M(L(G)).  With ``strip_forced`` a pendant hanging
    off a degree-2 vertex is removed together with that vertex; without it
    such pendants are left in place.  Stops early if a pendant sits on a
    vertex of degree 1 or more than 3.
    """
    log: List[PendantLog] = []
    while True:
        site = None
        for u in range(g.num_vertices):
            if degree(g, u) != 1:
                continue
            (v, _), = g.incident(u)
            dv = degree(g, v)
            if dv == 3 or (dv == 2 and strip_forced):
                site = (u, dv)
                break
        if site is None:
            return g, log
        u, dv = site
        if dv == 2:
            h = strip_forced_pendant(g, u).graph
            log.append(PendantLog("ForcedPendant", u, g, h))
            g = h
            continue
        try:
            h = pendant_reduce(g, u).graph
            log.append(PendantLog("Claim1", u, g, h))
        except TransformError:
            h = multi_pendant_fix(g, u).graph
            log.append(PendantLog("MultiPendantFix", u, g, h))
        g = h
