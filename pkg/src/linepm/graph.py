"""Loop-free multigraphs with stable vertex and edge ids.

A :class:`MultiGraph` is an immutable edge list over dense vertex ids
``0 .. num_vertices-1``.  Edge ``i`` is ``edges[i]``; parallel edges are
separate entries.  Loops are rejected at construction.
"""
from __future__ import annotations

import hashlib
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

Edge = Tuple[int, int]


class GraphError(ValueError):
    """Malformed graph: a loop, an out-of-range id, or a bad file."""


@dataclass(frozen=True)
class MultiGraph:
    num_vertices: int
    edges: Tuple[Edge, ...] = ()
    _adj: Tuple[Tuple[Tuple[int, int], ...], ...] = field(
        default=(), init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if self.num_vertices < 0:
            raise GraphError(f"negative vertex count {self.num_vertices}")
        norm = []
        for i, e in enumerate(self.edges):
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphError(f"edge {i} is a loop at vertex {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise GraphError(
                    f"edge {i} = ({u}, {v}) out of range for {self.num_vertices} vertices"
                )
            norm.append((u, v))
        object.__setattr__(self, "edges", tuple(norm))
        adj: List[List[Tuple[int, int]]] = [[] for _ in range(self.num_vertices)]
        for i, (u, v) in enumerate(norm):
            adj[u].append((v, i))
            adj[v].append((u, i))
        object.__setattr__(self, "_adj", tuple(tuple(a) for a in adj))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def incident(self, v: int) -> Tuple[Tuple[int, int], ...]:
        """``(neighbor, edge_id)`` pairs at ``v``, one per edge copy."""
        self._check_vertex(v)
        return self._adj[v]

    def neighbors(self, v: int) -> List[int]:
        return [w for w, _ in self.incident(v)]

    def other_end(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        if v == a:
            return b
        if v == b:
            return a
        raise GraphError(f"vertex {v} is not an endpoint of edge {e}")

    def multiplicity(self, u: int, v: int) -> int:
        return sum(1 for w, _ in self.incident(u) if w == v)

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.num_vertices):
            raise GraphError(f"vertex {v} out of range for {self.num_vertices} vertices")

    def is_simple(self) -> bool:
        seen = set()
        for u, v in self.edges:
            key = (min(u, v), max(u, v))
            if key in seen:
                return False
            seen.add(key)
        return True

    def to_dict(self) -> dict:
        return {"num_vertices": self.num_vertices, "edges": [list(e) for e in self.edges]}

    def __len__(self) -> int:
        return self.num_vertices


def degree(g: MultiGraph, v: int) -> int:
    return len(g.incident(v))


def degrees(g: MultiGraph) -> List[int]:
    deg = [0] * g.num_vertices
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def degree_census(g: MultiGraph) -> Dict[int, int]:
    return dict(sorted(Counter(degrees(g)).items()))


def components(g: MultiGraph) -> List[List[int]]:
    seen = [False] * g.num_vertices
    comps = []
    for s in range(g.num_vertices):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y, _ in g.incident(x):
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def is_connected(g: MultiGraph) -> bool:
    return len(components(g)) <= 1


def bridges(g: MultiGraph) -> Set[int]:
    """Edge ids whose removal disconnects their component.

    Iterative lowpoint DFS.  Only the tree edge itself is skipped when
    scanning back edges, so a parallel copy counts as a back edge and a
    doubled edge is never a bridge.
    """
    n = g.num_vertices
    disc = [-1] * n
    low = [0] * n
    out: Set[int] = set()
    t = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = t
        t += 1
        # frame: (vertex, edge id used to enter, iterator position)
        stack = [(root, -1, 0)]
        while stack:
            v, via, i = stack[-1]
            inc = g.incident(v)
            if i < len(inc):
                stack[-1] = (v, via, i + 1)
                w, e = inc[i]
                if e == via:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, e, 0))
                else:
                    low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] > disc[p]:
                        out.add(via)
    return out


def delete_vertices(
    g: MultiGraph, doomed: Iterable[int]
) -> Tuple[MultiGraph, Dict[int, int], Dict[int, int]]:
    """Remove vertices and their incident edges, compacting ids.

    Returns ``(graph, vertex_map, edge_map)`` with old -> new ids for the
    survivors.
    """
    doomed = set(doomed)
    for v in doomed:
        g._check_vertex(v)
    vmap: Dict[int, int] = {}
    for v in range(g.num_vertices):
        if v not in doomed:
            vmap[v] = len(vmap)
    emap: Dict[int, int] = {}
    edges = []
    for i, (u, v) in enumerate(g.edges):
        if u in vmap and v in vmap:
            emap[i] = len(edges)
            edges.append((vmap[u], vmap[v]))
    return MultiGraph(len(vmap), tuple(edges)), vmap, emap


def induced_subgraph(g: MultiGraph, keep: Iterable[int]) -> Tuple[MultiGraph, Dict[int, int]]:
    keep = set(keep)
    h, vmap, _ = delete_vertices(g, (v for v in range(g.num_vertices) if v not in keep))
    return h, vmap


def disjoint_union(a: MultiGraph, b: MultiGraph) -> MultiGraph:
    off = a.num_vertices
    return MultiGraph(
        a.num_vertices + b.num_vertices,
        a.edges + tuple((u + off, v + off) for u, v in b.edges),
    )


def relabel(g: MultiGraph, perm: Sequence[int]) -> MultiGraph:
    """Apply the vertex permutation ``old -> perm[old]``."""
    return MultiGraph(g.num_vertices, tuple((perm[u], perm[v]) for u, v in g.edges))


def digest(g: MultiGraph) -> str:
    """Stable content hash.

    sha256 over ``"<num_vertices>|u-v,u-v,..."`` where each pair is written
    as ``min-max`` and the pairs are sorted; parallel edges repeat.  It
    depends on vertex labels but not on edge order.
    """
    pairs = sorted((min(u, v), max(u, v)) for u, v in g.edges)
    body = f"{g.num_vertices}|" + ",".join(f"{u}-{v}" for u, v in pairs)
    return hashlib.sha256(body.encode()).hexdigest()[:16]


# --- standard small graphs -------------------------------------------------

def cycle(k: int) -> MultiGraph:
    if k == 2:
        return MultiGraph(2, ((0, 1), (0, 1)))
    if k < 2:
        raise GraphError("cycle needs at least 2 vertices")
    return MultiGraph(k, tuple((i, (i + 1) % k) for i in range(k)))


def path(k: int) -> MultiGraph:
    return MultiGraph(k, tuple((i, i + 1) for i in range(k - 1)))


def complete(k: int) -> MultiGraph:
    return MultiGraph(k, tuple((i, j) for i in range(k) for j in range(i + 1, k)))


def star(k: int) -> MultiGraph:
    """K_{1,k} with the center at vertex 0."""
    return MultiGraph(k + 1, tuple((0, i) for i in range(1, k + 1)))


def complete_bipartite(a: int, b: int) -> MultiGraph:
    return MultiGraph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def fat_edge(k: int) -> MultiGraph:
    """Two vertices joined by ``k`` parallel edges."""
    return MultiGraph(2, tuple((0, 1) for _ in range(k)))


# --- file formats ----------------------------------------------------------

def from_json_obj(obj: dict) -> MultiGraph:
    try:
        n = obj["num_vertices"]
        raw = obj["edges"]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"graph JSON needs 'num_vertices' and 'edges': {exc}") from None
    if not isinstance(n, int) or n < 0:
        raise GraphError(f"num_vertices must be a non-negative integer, got {n!r}")
    edges = []
    for i, pair in enumerate(raw):
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise GraphError(f"edges[{i}]: expected a pair, got {pair!r}")
        u, v = pair
        if not (isinstance(u, int) and isinstance(v, int)):
            raise GraphError(f"edges[{i}]: non-integer endpoint in {pair!r}")
        if u == v:
            raise GraphError(f"edges[{i}]: loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edges[{i}]: ({u}, {v}) out of range for {n} vertices")
        edges.append((u, v))
    return MultiGraph(n, tuple(edges))


def parse_edge_list(text: str) -> MultiGraph:
    """Read the ``p <N> <M>`` text format.  Blank lines and ``#``/``c`` comments are skipped."""
    header: Optional[Tuple[int, int]] = None
    edges: List[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("c "):
            continue
        parts = line.split()
        if header is None:
            if parts[0] != "p" or len(parts) != 3:
                raise GraphError(f"line {lineno}: expected header 'p <N> <M>', got {line!r}")
            try:
                header = (int(parts[1]), int(parts[2]))
            except ValueError:
                raise GraphError(f"line {lineno}: bad header {line!r}") from None
            continue
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer endpoint in {line!r}") from None
        n = header[0]
        if u == v:
            raise GraphError(f"line {lineno}: loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"line {lineno}: ({u}, {v}) out of range for {n} vertices")
        edges.append((u, v))
    if header is None:
        raise GraphError("missing 'p <N> <M>' header")
    if len(edges) != header[1]:
        raise GraphError(f"header promises {header[1]} edges, found {len(edges)}")
    return MultiGraph(header[0], tuple(edges))


def format_edge_list(g: MultiGraph) -> str:
    lines = [f"p {g.num_vertices} {g.num_edges}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def loads(text: str) -> Tuple[MultiGraph, dict]:
    """Parse either format; returns the graph and any JSON ``meta`` block."""
    import json

    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
        return from_json_obj(obj), dict(obj.get("meta", {}))
    return parse_edge_list(text), {}


def dumps(g: MultiGraph, meta: Optional[dict] = None) -> str:
    import json

    obj: dict = {}
    if meta:
        obj["meta"] = meta
    obj.update(g.to_dict())
    return json.dumps(obj, separators=(",", ":")) + "\n"


class Builder:
    """Mutable helper for assembling graphs by named vertices."""

    def __init__(self) -> None:
        self.index: Dict[object, int] = {}
        self.edges: List[Edge] = []

    def vertex(self, key: object) -> int:
        if key not in self.index:
            self.index[key] = len(self.index)
        return self.index[key]

    def fresh(self) -> object:
        """A new anonymous vertex; returns its key."""
        key = ("_fresh", len(self.index))
        self.vertex(key)
        return key

    def edge(self, a: object, b: object) -> int:
        """Join the vertices with keys ``a`` and ``b``; returns the edge id."""
        self.edges.append((self.vertex(a), self.vertex(b)))
        return len(self.edges) - 1

    def build(self) -> MultiGraph:
        return MultiGraph(len(self.index), tuple(self.edges))


def edge_buckets(g: MultiGraph) -> Dict[Tuple[int, int], List[int]]:
    """Unordered endpoint pair -> edge ids carrying it."""
    out: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    for i, (u, v) in enumerate(g.edges):
        out[(min(u, v), max(u, v))].append(i)
    return dict(out)
