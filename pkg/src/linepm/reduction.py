"""Inductive evaluation of M(L(G)) for connected {2,3}-degree multigraphs.

For a connected loop-free multigraph with every degree 2 or 3 and an
even number of edges, M(L(G)) = 2^(n/2 + 1) where n counts the degree-3
vertices.  :func:`reduce` proves this instance by instance: it picks two
degree-3 vertices ``u``, ``v`` joined by a chain of ``j`` degree-2
vertices, shortens the chain to ``j`` in {0, 1}, then rewrites the
neighborhood into one or two smaller instances.  Every rewrite is
recorded as a :class:`ReductionStep`; the product of multipliers over
the step tree is the count.  L(G) itself is never built unless steps are
being checked.

Site choice: the lowest-id degree-3 vertex ``u``, then the shortest
degree-2 chain from ``u`` to a different degree-3 vertex, ties broken by
the lowest id of the chain's first edge.

Rule tags and their multipliers:

==================  ==========  ==========================================
tag                 successors  rewrite
==================  ==========  ==========================================
BaseCycle           0  (x2)     even cycle, n = 0
Parity22/Parity23   1  (x1)     drop two interior chain vertices
Case1_1             1  (x2)     u=v doubled: delete v, join u to v's third
                                neighbor
Case1_2_1a          2  (x1)     u-v bridge: even side, and odd side with
                                the pendant reduced
Case1_2_1b          2  (x1)     as 1_2_1a, odd side needs the doubled-edge
                                fix first
Case1_2_2           1  (x2)     u-v not a bridge: delete v, join its other
                                neighbors
Case2_special       0  (x4)     the 3-vertex theta with one edge subdivided
Case2_1             1  (x2)     u-v1-v plus edge u-v: delete v1
Case2_2_analog      1 or 2      u-v1-v, no u-v edge; bridge or not as in
                                Case 1.2
==================  ==========  ==========================================
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .counters import CountResult, count_brute, count_frontier, power_of_two_exponent
from .graph import (
    MultiGraph,
    bridges,
    components,
    degree,
    degrees,
    delete_vertices,
    digest,
    from_json_obj,
    is_connected,
)
from .linegraph import line_graph
from .transforms import (
    PendantLog,
    TransformError,
    _rebuild,
    _new,
    exhaust_pendants,
    multi_pendant_fix,
    pendant_reduce,
)

RULES = (
    "BaseCycle", "Parity22", "Parity23", "Case1_1", "Case1_2_1a", "Case1_2_1b",
    "Case1_2_2", "Case2_special", "Case2_1", "Case2_2_analog", "Claim1",
    "MultiPendantFix", "ForcedPendant", "ComponentProduct",
)


class InstanceError(ValueError):
    """Input graph does not satisfy the hypotheses.  ``kind`` is one of
    ``disconnected``, ``degree``, ``odd_edges``."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


class EngineError(RuntimeError):
    """An internal invariant broke.  Always a bug in this module."""


class StepCheckError(RuntimeError):
    def __init__(self, step: "ReductionStep", detail: str):
        super().__init__(f"step {step.rule} at {step.before_digest} failed: {detail}")
        self.step = step


@dataclass(frozen=True)
class TheoremInstance:
    graph: MultiGraph
    n3: int

    @property
    def exponent(self) -> int:
        return self.n3 // 2 + 1


def validate_instance(g: MultiGraph) -> TheoremInstance:
    if not is_connected(g):
        raise InstanceError("disconnected", f"graph has {len(components(g))} components")
    deg = degrees(g)
    bad = [v for v, d in enumerate(deg) if d not in (2, 3)]
    if bad:
        v = bad[0]
        raise InstanceError(
            "degree", f"vertex {v} has degree {deg[v]}; all degrees must be 2 or 3"
            + (f" ({len(bad)} offending vertices)" if len(bad) > 1 else "")
        )
    if g.num_edges % 2:
        raise InstanceError("odd_edges", f"graph has {g.num_edges} edges; an even count is required")
    n3 = sum(1 for d in deg if d == 3)
    assert n3 % 2 == 0
    return TheoremInstance(g, n3)


# --- sites -----------------------------------------------------------------

@dataclass(frozen=True)
class BaseCycle:
    pass


@dataclass(frozen=True)
class Site:
    """Chain ``path[0]=u, path[1..j], path[-1]=v`` through degree-2 vertices;
    ``chain_edges[i]`` joins ``path[i]`` and ``path[i+1]``."""
    path: Tuple[int, ...]
    chain_edges: Tuple[int, ...]

    @property
    def u(self) -> int:
        return self.path[0]

    @property
    def v(self) -> int:
        return self.path[-1]

    @property
    def j(self) -> int:
        return len(self.path) - 2


def _walk_chain(g: MultiGraph, u: int, e: int) -> Tuple[List[int], List[int]]:
    verts = [u]
    edges = [e]
    cur = g.other_end(e, u)
    while degree(g, cur) == 2:
        verts.append(cur)
        (a, ea), (b, eb) = g.incident(cur)
        e = eb if ea == edges[-1] else ea
        edges.append(e)
        cur = g.other_end(e, cur)
    verts.append(cur)
    return verts, edges


def find_reduction_site(inst: TheoremInstance) -> Union[BaseCycle, Site]:
    g = inst.graph
    if inst.n3 == 0:
        return BaseCycle()
    u = next(v for v in range(g.num_vertices) if degree(g, v) == 3)
    best = None
    for _, e in sorted(g.incident(u), key=lambda p: p[1]):
        verts, edges = _walk_chain(g, u, e)
        if verts[-1] == u:
            continue
        key = (len(verts), e)
        if best is None or key < best[0]:
            best = (key, verts, edges)
    if best is None:
        raise EngineError(f"no chain from {u} to another degree-3 vertex")
    return Site(tuple(best[1]), tuple(best[2]))


# --- steps -----------------------------------------------------------------

@dataclass
class ReductionStep:
    rule: str
    graph: MultiGraph
    multiplier: int
    before_digest: str = ""
    after: List[str] = field(default_factory=list)
    children: List["ReductionStep"] = field(default_factory=list)
    check: Optional[dict] = None
    note: str = ""

    def __post_init__(self) -> None:
        if not self.before_digest:
            self.before_digest = digest(self.graph)


def _step(rule: str, g: MultiGraph, multiplier: int, succ: Sequence[MultiGraph], note: str = "") -> ReductionStep:
    return ReductionStep(rule, g, multiplier, after=[digest(h) for h in succ], note=note)


def normalize_parity(inst: TheoremInstance, site: Site) -> Tuple[TheoremInstance, ReductionStep]:
    """Remove the first two interior vertices of the chain (j -> j-2)."""
    if site.j < 2:
        raise EngineError(f"normalize_parity needs j >= 2, got {site.j}")
    g = inst.graph
    p = site.path
    rw = _rebuild(g, drop_vertices=[p[1], p[2]], add_edges=[(p[0], p[3])])
    rule = "Parity22" if site.j % 2 == 0 else "Parity23"
    return _successor(rw.graph), _step(rule, g, 1, [rw.graph], note=f"j={site.j}")


def _successor(h: MultiGraph) -> TheoremInstance:
    try:
        return validate_instance(h)
    except InstanceError as exc:
        raise EngineError(f"successor is not a valid instance: {exc}") from None


def _third(g: MultiGraph, x: int, skip: Sequence[int]) -> List[Tuple[int, int]]:
    """Incidences ``(neighbor, edge)`` at ``x`` excluding edge ids in ``skip``."""
    return [(w, e) for w, e in g.incident(x) if e not in skip]


def _join(a: int, b: int, interior: int) -> Tuple[int, List[Tuple[object, object]]]:
    """Path from a to b with ``interior`` fresh vertices, as rebuild arguments."""
    chain: List[object] = [a] + [_new(k) for k in range(interior)] + [b]
    return interior, list(zip(chain, chain[1:]))


def _drop_and_join(g: MultiGraph, drop: Sequence[int], a: int, b: int, odd: bool) -> MultiGraph:
    """Delete ``drop`` and join a to b by a path keeping |E| even.

    ``odd`` asks for a path with an odd number of edges (1 edge, or 3 when
    a == b so no loop appears); otherwise 2 edges.
    """
    if odd:
        interior = 2 if a == b else 0
    else:
        interior = 1
    n_fresh, add = _join(a, b, interior)
    return _rebuild(g, drop_vertices=drop, n_fresh=n_fresh, add_edges=add).graph


def _side_split(g: MultiGraph, cut_edges: Sequence[int], a: int) -> Tuple[List[int], List[int]]:
    """Vertices reachable from ``a`` without crossing ``cut_edges``, and the rest."""
    cut = set(cut_edges)
    seen = {a}
    stack = [a]
    while stack:
        x = stack.pop()
        for y, e in g.incident(x):
            if e not in cut and y not in seen:
                seen.add(y)
                stack.append(y)
    rest = [v for v in range(g.num_vertices) if v not in seen]
    return sorted(seen), rest


def _edges_within(g: MultiGraph, vs: Sequence[int]) -> int:
    s = set(vs)
    return sum(1 for x, y in g.edges if x in s and y in s)


def _keep(g: MultiGraph, vs: Sequence[int]) -> Tuple[MultiGraph, Dict[int, int]]:
    s = set(vs)
    h, vmap, _ = delete_vertices(g, [v for v in range(g.num_vertices) if v not in s])
    return h, vmap


def _pendant_side(g: MultiGraph, side: Sequence[int], pendant: int) -> Tuple[MultiGraph, bool]:
    """Graph on ``side + [pendant]`` with the pendant reduced away.
    Returns the graph and whether the doubled-edge fix was needed."""
    h, vmap = _keep(g, list(side) + [pendant])
    p = vmap[pendant]
    try:
        return pendant_reduce(h, p).graph, False
    except TransformError:
        fixed = multi_pendant_fix(h, p).graph
        return pendant_reduce(fixed, p).graph, True


Outcome = Tuple[List[TheoremInstance], ReductionStep, Optional[MultiGraph]]


def apply_case(inst: TheoremInstance, site: Site) -> Tuple[List[TheoremInstance], ReductionStep]:
    succ, step, _ = _apply_case(inst, site)
    return succ, step


def _apply_case(inst: TheoremInstance, site: Site) -> Outcome:
    """Returns successors, the step, and for the two-way non-bridge cases
    the mirror-image graph whose count equals the successor's."""
    g = inst.graph
    if site.j == 0:
        return _case_adjacent(g, site)
    if site.j == 1:
        return _case_one_between(g, site)
    raise EngineError(f"apply_case needs j in {{0, 1}}, got {site.j}")


def _case_adjacent(g: MultiGraph, site: Site) -> Outcome:
    u, v = site.u, site.v
    k = g.multiplicity(u, v)
    if k >= 3:
        raise EngineError("three parallel u-v edges would make |E| odd")
    if k == 2:
        uv = [e for w, e in g.incident(u) if w == v]
        (u2, _), = _third(g, v, uv)
        h = _rebuild(g, drop_vertices=[v], add_edges=[(u, u2)]).graph
        return [_successor(h)], _step("Case1_1", g, 2, [h]), None

    e1 = site.chain_edges[0]
    (u1, _), (u2, _) = _third(g, u, [e1])
    (u3, _), (u4, _) = _third(g, v, [e1])
    if e1 in bridges(g):
        side_u, side_v = _side_split(g, [e1], u)
        if _edges_within(g, side_u) % 2 == 0:
            even, odd, a = side_u, side_v, u
        else:
            even, odd, a = side_v, side_u, v
        g1, _ = _keep(g, even)
        g3, fixed = _pendant_side(g, odd, a)
        rule = "Case1_2_1b" if fixed else "Case1_2_1a"
        return [_successor(g1), _successor(g3)], _step(rule, g, 1, [g1, g3]), None

    h1 = _drop_and_join(g, [v], u3, u4, odd=True)
    h2 = _drop_and_join(g, [u], u1, u2, odd=True)
    return [_successor(h1)], _step("Case1_2_2", g, 2, [h1]), h2


def _case_one_between(g: MultiGraph, site: Site) -> Outcome:
    u, v1, v = site.path
    ea, eb = site.chain_edges
    k = g.multiplicity(u, v)
    if k == 2:
        if g.num_vertices != 3 or g.num_edges != 4:
            raise EngineError("doubled u-v edge with a 1-vertex chain outside the 3-vertex graph")
        return [], _step("Case2_special", g, 4, []), None
    if k == 1:
        h = _rebuild(g, drop_vertices=[v1]).graph
        return [_successor(h)], _step("Case2_1", g, 2, [h]), None

    (u1, _), (u2, _) = _third(g, u, [ea])
    (u3, _), (u4, _) = _third(g, v, [eb])
    if ea in bridges(g):
        side_u, side_v = _side_split(g, [ea, eb], u)
        side_v = [x for x in side_v if x != v1]
        if _edges_within(g, side_u) % 2 == 0:
            # the u-v1-v chain pairs its two edges in every perfect matching of L(G)
            ga, _ = _keep(g, side_u)
            gb, _ = _keep(g, side_v)
            note = "bridge, even sides"
        else:
            # the two chain edges are never paired; each side keeps its half as a pendant
            ga, _ = _pendant_side(g, side_u, v1)
            gb, _ = _pendant_side(g, side_v, v1)
            note = "bridge, odd sides"
        return ([_successor(ga), _successor(gb)],
                _step("Case2_2_analog", g, 1, [ga, gb], note=note), None)

    h1 = _drop_and_join(g, [v1, v], u3, u4, odd=False)
    h2 = _drop_and_join(g, [v1, u], u1, u2, odd=False)
    return [_successor(h1)], _step("Case2_2_analog", g, 2, [h1], note="no bridge"), h2


# --- driver ----------------------------------------------------------------

def _ml(g: MultiGraph, counter: Callable[[MultiGraph], CountResult]) -> int:
    return counter(line_graph(g).graph).value


def _check(step: ReductionStep, succ: Sequence[MultiGraph], mirror: Optional[MultiGraph],
           counter: Callable[[MultiGraph], CountResult]) -> None:
    lhs = _ml(step.graph, counter)
    parts = [_ml(h, counter) for h in succ]
    rhs = step.multiplier
    for p in parts:
        rhs *= p
    check = {"lhs": lhs, "rhs": rhs, "parts": parts}
    ok = lhs == rhs
    if mirror is not None:
        other = _ml(mirror, counter)
        check["mirror"] = other
        ok = ok and other == parts[0] and lhs == parts[0] + other
    check["ok"] = ok
    step.check = check
    if not ok:
        raise StepCheckError(step, json.dumps(check))


@dataclass
class ReductionTrace:
    root: TheoremInstance
    steps: ReductionStep
    claimed_count: CountResult
    preprocessing: List[PendantLog] = field(default_factory=list)

    def iter_steps(self):
        stack = [self.steps]
        while stack:
            s = stack.pop()
            yield s
            stack.extend(reversed(s.children))

    @property
    def num_steps(self) -> int:
        return sum(1 for _ in self.iter_steps())

    def checks(self) -> List[dict]:
        return [s.check for s in self.iter_steps() if s.check is not None]

    def to_dict(self, include_graphs: bool = True) -> dict:
        flat: List[ReductionStep] = list(self.iter_steps())
        index = {id(s): i for i, s in enumerate(flat)}
        steps = []
        for s in flat:
            d = {
                "id": index[id(s)],
                "rule": s.rule,
                "before": s.before_digest,
                "after": list(s.after),
                "children": [index[id(c)] for c in s.children],
                "multiplier": s.multiplier,
            }
            if s.note:
                d["note"] = s.note
            if s.check is not None:
                d["check"] = s.check
            if include_graphs:
                d["graph"] = s.graph.to_dict()
            steps.append(d)
        pre = []
        for p in self.preprocessing:
            d = {"rule": p.rule, "vertex": p.vertex,
                 "before": digest(p.before), "after": digest(p.after)}
            if include_graphs:
                d["graph"] = p.before.to_dict()
                d["result"] = p.after.to_dict()
            pre.append(d)
        return {
            "format": "linepm-trace/1",
            "root": self.root.graph.to_dict(),
            "root_digest": digest(self.root.graph),
            "n": self.root.n3,
            "preprocessing": pre,
            "steps": steps,
            "claimed_count": str(self.claimed_count.value),
            "claimed_exponent": self.claimed_count.pow2_exponent,
        }

    def to_json(self, include_graphs: bool = True) -> str:
        return json.dumps(self.to_dict(include_graphs), indent=1, sort_keys=True) + "\n"


def reduce(
    g: MultiGraph,
    check_steps_up_to: Optional[int] = None,
    counter: Callable[[MultiGraph], CountResult] = count_brute,
) -> ReductionTrace:
    """Build the full step tree for ``g`` and return its trace.

    With ``check_steps_up_to=N`` every step whose input has at most N
    vertices is confirmed by counting L of both sides with ``counter``;
    a mismatch raises :class:`StepCheckError`.
    """
    root = validate_instance(g)
    top: Optional[ReductionStep] = None
    work: List[Tuple[TheoremInstance, Optional[ReductionStep]]] = [(root, None)]
    while work:
        inst, parent = work.pop()
        site = find_reduction_site(inst)
        mirror = None
        if isinstance(site, BaseCycle):
            succ: List[TheoremInstance] = []
            step = _step("BaseCycle", inst.graph, 2, [])
        elif site.j >= 2:
            nxt, step = normalize_parity(inst, site)
            succ = [nxt]
        else:
            succ, step, mirror = _apply_case(inst, site)
        for s in succ:
            if (s.n3, s.graph.num_vertices) >= (inst.n3, inst.graph.num_vertices):
                raise EngineError(f"{step.rule} did not shrink the instance")
        if check_steps_up_to is not None and inst.graph.num_vertices <= check_steps_up_to:
            _check(step, [s.graph for s in succ], mirror, counter)
        if parent is None:
            top = step
        else:
            parent.children.append(step)
        for s in reversed(succ):
            work.append((s, step))
    assert top is not None

    value = _tree_value(top)
    exp = power_of_two_exponent(value)
    if exp != root.exponent:
        raise EngineError(f"step tree evaluates to {value}, expected 2^{root.exponent}")
    return ReductionTrace(root, top, CountResult(value, exp, "reduction"))


def _tree_value(top: ReductionStep) -> int:
    vals: Dict[int, int] = {}
    stack: List[Tuple[ReductionStep, bool]] = [(top, False)]
    while stack:
        s, done = stack.pop()
        if done:
            val = s.multiplier
            for c in s.children:
                val *= vals[id(c)]
            vals[id(s)] = val
        else:
            stack.append((s, True))
            stack.extend((c, False) for c in s.children)
    return vals[id(top)]


def reduce_with_pendants(
    g: MultiGraph,
    check_steps_up_to: Optional[int] = None,
    strip_forced: bool = False,
    counter: Callable[[MultiGraph], CountResult] = count_brute,
) -> ReductionTrace:
    """Exhaust pendant rules, then :func:`reduce`.  The preprocessing steps
    are kept on the trace; the claimed count is M(L(g))."""
    h, log = exhaust_pendants(g, strip_forced=strip_forced)
    if check_steps_up_to is not None:
        for entry in log:
            if entry.before.num_vertices <= check_steps_up_to:
                a, b = _ml(entry.before, counter), _ml(entry.after, counter)
                if a != b:
                    raise StepCheckError(
                        ReductionStep(entry.rule, entry.before, 1),
                        f"M(L) changed from {a} to {b}",
                    )
    trace = reduce(h, check_steps_up_to, counter)
    trace.preprocessing = log
    return trace


# --- independent replay ----------------------------------------------------

@dataclass
class ReplayReport:
    steps_checked: int = 0
    steps_skipped: int = 0
    errors: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def replay_trace(
    doc: Union[str, dict],
    max_vertices: Optional[int] = None,
    counter: Callable[[MultiGraph], CountResult] = count_frontier,
) -> ReplayReport:
    """Re-verify a serialized trace from its stored graphs alone.

    Checks the digests, the tree shape, the product of multipliers, and,
    for each step whose graph has at most ``max_vertices`` vertices (all
    when ``None``), the count identity by direct counting.
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    rep = ReplayReport()
    steps = doc["steps"]
    by_id = {s["id"]: s for s in steps}
    graphs = {}
    for s in steps:
        if "graph" not in s:
            rep.errors.append(f"step {s['id']}: no graph stored")
            continue
        gr = from_json_obj(s["graph"])
        graphs[s["id"]] = gr
        if digest(gr) != s["before"]:
            rep.errors.append(f"step {s['id']}: digest mismatch")
        kids = [by_id[c]["before"] for c in s["children"]]
        if kids != s["after"]:
            rep.errors.append(f"step {s['id']}: children do not match recorded successors")
    if rep.errors:
        return rep

    def value(i: int) -> int:
        s = by_id[i]
        out = s["multiplier"]
        for c in s["children"]:
            out *= vals[c]
        return out

    vals: Dict[int, int] = {}
    for s in sorted(steps, key=lambda s: -s["id"]):   # children have larger ids
        vals[s["id"]] = value(s["id"])
    total = vals[0]
    if str(total) != doc["claimed_count"]:
        rep.errors.append(f"tree evaluates to {total}, trace claims {doc['claimed_count']}")

    root = from_json_obj(doc["root"])
    if digest(root) != steps[0]["before"]:
        rep.errors.append("root graph differs from the first step's graph")
    try:
        inst = validate_instance(root)
        if doc["claimed_exponent"] != inst.exponent:
            rep.errors.append(f"claimed exponent {doc['claimed_exponent']} != n/2+1 = {inst.exponent}")
    except InstanceError as exc:
        rep.errors.append(f"root is not a valid instance: {exc}")

    for s in steps:
        gr = graphs[s["id"]]
        if max_vertices is not None and gr.num_vertices > max_vertices:
            rep.steps_skipped += 1
            continue
        lhs = _ml(gr, counter)
        rhs = s["multiplier"]
        for c in s["children"]:
            rhs *= _ml(graphs[c], counter)
        rep.steps_checked += 1
        if lhs != rhs:
            rep.errors.append(f"step {s['id']} ({s['rule']}): M(L) = {lhs}, step claims {rhs}")

    for k, p in enumerate(doc.get("preprocessing", [])):
        if "graph" not in p:
            continue
        before, after = from_json_obj(p["graph"]), from_json_obj(p["result"])
        if max_vertices is not None and before.num_vertices > max_vertices:
            rep.steps_skipped += 1
            continue
        rep.steps_checked += 1
        if _ml(before, counter) != _ml(after, counter):
            rep.errors.append(f"preprocessing {k} ({p['rule']}) changed M(L)")
    if doc.get("preprocessing") and "graph" in doc["preprocessing"][-1]:
        if digest(from_json_obj(doc["preprocessing"][-1]["result"])) != doc["root_digest"]:
            rep.errors.append("preprocessing does not end at the root graph")
    return rep
