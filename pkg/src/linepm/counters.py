"""Exact perfect-matching counters.

``count_brute`` is the oracle: plain branching on a minimum-degree
vertex.  ``count_frontier`` sweeps a vertex order and keeps, for every
subset of the current frontier, the number of partial matchings that
leave exactly that subset matched.  The two share no code beyond the
graph type.
"""
from __future__ import annotations

import os
from collections import defaultdict, deque
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence

from .graph import MultiGraph

DEFAULT_WIDTH_CAP = 26
WIDTH_CAP_ENV = "LINEPM_WIDTH_CAP"


class FrontierWidthError(RuntimeError):
    """The chosen order needs a frontier wider than the configured cap."""

    def __init__(self, width: int, cap: int):
        super().__init__(
            f"frontier width {width} exceeds cap {cap}; raise the cap "
            f"(--width-cap or ${WIDTH_CAP_ENV}) or use the brute-force counter"
        )
        self.width = width
        self.cap = cap


def default_width_cap() -> int:
    raw = os.environ.get(WIDTH_CAP_ENV)
    return int(raw) if raw else DEFAULT_WIDTH_CAP


@dataclass(frozen=True)
class CountResult:
    value: int
    pow2_exponent: Optional[int] = None
    algorithm: str = "brute"

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError("matching counts are non-negative")
        if self.pow2_exponent is not None and self.value != 1 << self.pow2_exponent:
            raise ValueError(f"{self.value} is not 2^{self.pow2_exponent}")


def power_of_two_exponent(value: int) -> Optional[int]:
    if value > 0 and value & (value - 1) == 0:
        return value.bit_length() - 1
    return None


def verify_power_of_two(c: CountResult) -> CountResult:
    """Return ``c`` annotated with its base-2 exponent (or ``None``)."""
    return replace(c, pow2_exponent=power_of_two_exponent(c.value))


def _result(value: int, algorithm: str) -> CountResult:
    return CountResult(value, power_of_two_exponent(value), algorithm)


# --- brute force -----------------------------------------------------------

def count_brute(g: MultiGraph, memo: bool = False) -> CountResult:
    n = g.num_vertices
    if n % 2:
        return _result(0, "brute")
    # neighbor -> multiplicity, as bitmasks for fast "still present" tests
    nbrs: List[Dict[int, int]] = [defaultdict(int) for _ in range(n)]
    for u, v in g.edges:
        nbrs[u][v] += 1
        nbrs[v][u] += 1
    nbr_items = [sorted(d.items()) for d in nbrs]
    cache: Optional[Dict[int, int]] = {} if memo else None

    def rec(alive: int) -> int:
        if alive == 0:
            return 1
        if cache is not None and alive in cache:
            return cache[alive]
        best = -1
        best_deg = n + 1
        a = alive
        while a:
            low = a & -a
            v = low.bit_length() - 1
            a ^= low
            d = 0
            for w, _ in nbr_items[v]:
                if alive >> w & 1:
                    d += 1
            if d < best_deg:
                best, best_deg = v, d
                if d == 0:
                    break
        total = 0
        if best_deg > 0:
            rest = alive & ~(1 << best)
            for w, mult in nbr_items[best]:
                if rest >> w & 1:
                    total += mult * rec(rest & ~(1 << w))
        if cache is not None:
            cache[alive] = total
        return total

    return _result(rec((1 << n) - 1), "brute")


# --- frontier dynamic programming -----------------------------------------

def bfs_order(g: MultiGraph, start: int = 0) -> List[int]:
    """Breadth-first order from ``start``, ties broken by id; unreached
    components follow, each from its lowest id."""
    n = g.num_vertices
    seen = [False] * n
    order: List[int] = []
    starts = [start] + [v for v in range(n) if v != start] if n else []
    for s in starts:
        if seen[s]:
            continue
        seen[s] = True
        q = deque([s])
        while q:
            v = q.popleft()
            order.append(v)
            for w in sorted(set(g.neighbors(v))):
                if not seen[w]:
                    seen[w] = True
                    q.append(w)
    return order


def frontier_width(g: MultiGraph, order: Sequence[int]) -> int:
    """Largest number of simultaneously live vertices when sweeping ``order``."""
    pos = {v: i for i, v in enumerate(order)}
    last = [pos[v] for v in range(g.num_vertices)]
    for u, v in g.edges:
        last[u] = max(last[u], pos[v])
        last[v] = max(last[v], pos[u])
    leaving = [0] * len(order)
    for v in range(g.num_vertices):
        leaving[last[v]] += 1
    live = width = 0
    for i in range(len(order)):
        live += 1
        width = max(width, live)
        live -= leaving[i]
    return width


def low_width_order(g: MultiGraph, starts: Optional[Sequence[int]] = None) -> List[int]:
    """Best breadth-first order over several start vertices (all by default)."""
    if g.num_vertices == 0:
        return []
    if starts is None:
        starts = range(g.num_vertices)
    best: Optional[List[int]] = None
    best_w = 0
    for s in starts:
        order = bfs_order(g, s)
        w = frontier_width(g, order)
        if best is None or w < best_w:
            best, best_w = order, w
    assert best is not None
    return best


def count_frontier(
    g: MultiGraph,
    order: Optional[Sequence[int]] = None,
    width_cap: Optional[int] = None,
) -> CountResult:
    n = g.num_vertices
    if n % 2:
        return _result(0, "frontier")
    if n == 0:
        return _result(1, "frontier")
    cap = default_width_cap() if width_cap is None else width_cap
    if order is None:
        order = low_width_order(g)
    order = list(order)
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the vertices")
    width = frontier_width(g, order)
    if width > cap:
        raise FrontierWidthError(width, cap)

    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    mult: List[Dict[int, int]] = [defaultdict(int) for _ in range(n)]
    last = list(pos)
    for u, v in g.edges:
        mult[u][v] += 1
        mult[v][u] += 1
        last[u] = max(last[u], pos[v])
        last[v] = max(last[v], pos[u])
    retire: List[List[int]] = [[] for _ in range(n)]
    for v in range(n):
        retire[last[v]].append(v)

    # a set bit means "this frontier vertex is already matched"
    slot: Dict[int, int] = {}
    free = list(range(width - 1, -1, -1))
    states: Dict[int, int] = {0: 1}
    for i, v in enumerate(order):
        s = free.pop()
        slot[v] = s
        vbit = 1 << s
        back = [(1 << slot[w], m) for w, m in mult[v].items() if pos[w] < i]
        nxt: Dict[int, int] = defaultdict(int)
        for mask, c in states.items():
            nxt[mask] += c
            for wbit, m in back:
                if not mask & wbit:
                    nxt[mask | wbit | vbit] += c * m
        for w in retire[i]:
            b = 1 << slot.pop(w)
            free.append(b.bit_length() - 1)
            nxt = {mask ^ b: c for mask, c in nxt.items() if mask & b}
        states = nxt
        if not states:
            return _result(0, "frontier")
    return _result(states.get(0, 0), "frontier")


def count(g: MultiGraph, algo: str = "auto", width_cap: Optional[int] = None) -> CountResult:
    if algo == "brute":
        return count_brute(g)
    if algo == "frontier":
        return count_frontier(g, width_cap=width_cap)
    if algo != "auto":
        raise ValueError(f"unknown algorithm {algo!r}")
    try:
        return count_frontier(g, width_cap=width_cap)
    except FrontierWidthError:
        return count_brute(g)
