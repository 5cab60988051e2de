"""Seeded random graphs for property tests and the ``gen --seed`` families.

random_cubic_multigraph
    Stub pairing on ``nu`` vertices (3 stubs each) using a uniformly
    shuffled stub list; pairings containing a loop, or giving a
    disconnected graph, are redrawn.
random_theorem_instance
    A connected multigraph with degrees in {2, 3} and an even edge count.
    A cubic core is drawn by stub pairing with loops allowed, every loop
    is subdivided at least once, and further random subdivisions bring
    the edge count to an even number no larger than ``max_edges``.  With
    probability 1/8 (or when the core would not fit) an even cycle is
    returned instead.
random_multigraph
    Uniform random endpoint pairs (no loops) on ``nv`` vertices.

All functions take a :class:`random.Random` so results depend only on
the seed.
"""
from __future__ import annotations

import random
from typing import List, Optional, Tuple

from .graph import MultiGraph, cycle, is_connected


def _pair_stubs(nu: int, rng: random.Random) -> List[Tuple[int, int]]:
    stubs = [v for v in range(nu) for _ in range(3)]
    rng.shuffle(stubs)
    return [(stubs[i], stubs[i + 1]) for i in range(0, len(stubs), 2)]


def random_cubic_multigraph(nu: int, rng: random.Random, max_tries: int = 10_000) -> MultiGraph:
    if nu < 2 or nu % 2:
        raise ValueError("a cubic graph needs an even number (>= 2) of vertices")
    for _ in range(max_tries):
        pairs = _pair_stubs(nu, rng)
        if any(u == v for u, v in pairs):
            continue
        g = MultiGraph(nu, tuple(pairs))
        if is_connected(g):
            return g
    raise RuntimeError(f"no connected loop-free pairing found for nu={nu}")


def _subdivide_random(nu: int, edges: List[Tuple[int, int]], extra: int,
                      forced: List[int], rng: random.Random) -> MultiGraph:
    """Subdivide ``forced`` edge indices once, then ``extra`` random edges once each
    (an edge may be hit repeatedly, lengthening its path)."""
    hits = [0] * len(edges)
    for i in forced:
        hits[i] += 1
    for _ in range(extra):
        hits[rng.randrange(len(edges))] += 1
    out = []
    nv = nu
    for (u, v), h in zip(edges, hits):
        chain = [u] + list(range(nv, nv + h)) + [v]
        nv += h
        out.extend(zip(chain, chain[1:]))
    return MultiGraph(nv, tuple(out))


def random_theorem_instance(rng: random.Random, max_edges: int = 14) -> MultiGraph:
    cores = [nu for nu in (2, 4, 6, 8) if 3 * nu // 2 <= max_edges]
    if not cores or rng.random() < 1 / 8:
        half = rng.randint(1, max(1, max_edges // 2))
        return cycle(2 * half)
    for _ in range(1000):
        nu = rng.choice(cores)
        pairs = _pair_stubs(nu, rng)
        core = MultiGraph(nu, tuple((u, v) for u, v in pairs if u != v))
        # connectivity of the core (loops ignored) decides connectivity of the result
        if not is_connected(core):
            continue
        loops = [i for i, (u, v) in enumerate(pairs) if u == v]
        base = len(pairs) + len(loops)
        if base > max_edges:
            continue
        room = max_edges - base
        extra = rng.randint(0, room)
        if (base + extra) % 2:
            extra = extra - 1 if extra > 0 else extra + 1
        if base + extra > max_edges:
            continue
        return _subdivide_random(nu, pairs, extra, loops, rng)
    raise RuntimeError("could not draw an instance")


def random_multigraph(nv: int, ne: int, rng: random.Random,
                      connected: bool = False, max_tries: int = 1000) -> MultiGraph:
    if nv < 2 and ne > 0:
        raise ValueError("need two vertices for an edge")
    for _ in range(max_tries):
        edges = []
        for _ in range(ne):
            u, v = rng.sample(range(nv), 2)
            edges.append((u, v))
        g = MultiGraph(nv, tuple(edges))
        if not connected or is_connected(g):
            return g
    raise RuntimeError("could not draw a connected multigraph")


def random_small_multigraph(rng: random.Random, max_vertices: int = 12,
                            max_edges: int = 18) -> MultiGraph:
    nv = rng.randint(2, max_vertices)
    ne = rng.randint(1, max_edges)
    return random_multigraph(nv, ne, rng)


def seeded(seed: Optional[int]) -> random.Random:
    return random.Random(seed)
