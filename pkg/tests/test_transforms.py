import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from linepm.corpus import random_theorem_instance
from linepm.counters import count_brute
from linepm.graph import (
    MultiGraph, cycle, degree, degree_census, degrees, fat_edge, is_connected, path, star,
)
from linepm.transforms import (
    SplitSpec,
    TransformError,
    exhaust_pendants,
    multi_pendant_fix,
    pendant_reduce,
    split_vertex,
    strip_forced_pendant,
    subdivide_edge,
)

from _util import ml, multigraphs


def M(g):
    return count_brute(g).value


class TestSplit:
    def test_c4_gives_c6(self):
        g = cycle(4)
        ids = [e for _, e in g.incident(0)]
        h = split_vertex(g, SplitSpec(0, {ids[0]}, {ids[1]})).graph
        assert degree_census(h) == {2: 6} and is_connected(h)

    def test_star_center(self):
        g = star(3)
        h = split_vertex(g, SplitSpec(0, {0, 1}, {2})).graph
        # u' keeps two leaves plus x; u'' keeps one leaf plus x
        assert h.num_vertices == 6 and h.num_edges == 5
        assert degree_census(h) == {1: 3, 2: 2, 3: 1}
        assert M(h) == M(g) == 0

    def test_fresh_ids_order(self):
        g = star(3)
        rw = split_vertex(g, SplitSpec(0, {0, 1}, {2}))
        u1, u2, x = rw.new_vertices
        assert (u1, u2, x) == (3, 4, 5)
        assert sorted(rw.graph.neighbors(x)) == [u1, u2]
        assert degree(rw.graph, u1) == 3 and degree(rw.graph, u2) == 2

    def test_empty_side(self):
        h = split_vertex(cycle(4), SplitSpec(0, {0, 3}, set())).graph
        assert M(h) == M(cycle(4)) == 2

    def test_partition_must_cover(self):
        with pytest.raises(TransformError, match="does not match"):
            split_vertex(cycle(4), SplitSpec(0, {0}, set()))

    def test_partition_must_be_disjoint(self):
        with pytest.raises(TransformError, match="both sides"):
            split_vertex(cycle(4), SplitSpec(0, {0, 3}, {3}))

    def test_parallel_edges_split_apart(self):
        g = fat_edge(2)
        h = split_vertex(g, SplitSpec(0, {0}, {1})).graph
        assert M(h) == M(g) == 2


@settings(max_examples=200, deadline=None)
@given(multigraphs(min_vertices=1, max_vertices=9, max_edges=14), st.randoms(use_true_random=False))
def test_split_preserves_matchings(g, rnd):
    u = rnd.randrange(g.num_vertices)
    ids = [e for _, e in g.incident(u)]
    x = {e for e in ids if rnd.random() < 0.5}
    h = split_vertex(g, SplitSpec(u, x, set(ids) - x)).graph
    assert h.num_vertices == g.num_vertices + 2
    assert h.num_edges == g.num_edges + 2
    assert M(h) == M(g)


class TestSubdivide:
    def test_single_edge_twice(self):
        h = subdivide_edge(path(2), 0, 2).graph
        assert h.num_vertices == 4 and degree_census(h) == {1: 2, 2: 2}

    def test_triangle_once(self):
        h = subdivide_edge(cycle(3), 1, 1).graph
        assert degree_census(h) == {2: 4} and is_connected(h)

    def test_zero_is_identity(self):
        g = cycle(5)
        assert subdivide_edge(g, 2, 0).graph == g

    def test_errors(self):
        with pytest.raises(TransformError):
            subdivide_edge(cycle(3), 3, 1)
        with pytest.raises(TransformError):
            subdivide_edge(cycle(3), 0, -1)

    def test_edge_map(self):
        rw = subdivide_edge(cycle(4), 1, 2)
        assert 1 not in rw.edge_map
        assert len(rw.new_edges) == 3


def _inner_edges(g):
    deg = degrees(g)
    return [i for i, (u, v) in enumerate(g.edges) if deg[u] >= 2 and deg[v] >= 2]


@settings(max_examples=200, deadline=None)
@given(multigraphs(min_vertices=2, max_vertices=7, max_edges=9), st.integers(1, 2), st.randoms(use_true_random=False))
def test_even_subdivision(g, s, rnd):
    inner = _inner_edges(g)
    if not inner:
        return
    e = rnd.choice(inner)
    h = subdivide_edge(g, e, 2 * s).graph
    assert ml(h) == ml(g)
    assert M(h) == M(g)


@settings(max_examples=200, deadline=None)
@given(multigraphs(min_vertices=2, max_vertices=7, max_edges=9), st.randoms(use_true_random=False))
def test_odd_subdivision_parity(g, rnd):
    inner = _inner_edges(g)
    if not inner:
        return
    e = rnd.choice(inner)
    assert ml(subdivide_edge(g, e, 3).graph) == ml(subdivide_edge(g, e, 1).graph)


def pendant_triangle():
    # a-b-c triangle, pendant u on a; ids a=0 b=1 c=2 u=3
    return MultiGraph(4, ((0, 1), (1, 2), (2, 0), (0, 3)))


class TestPendant:
    def test_triangle_with_pendant(self):
        g = pendant_triangle()
        h = pendant_reduce(g, 3).graph
        assert h.num_vertices == 2 and h.multiplicity(0, 1) == 2
        assert ml(h) == ml(g) == 2

    def test_neighbor_degree_two(self):
        g = subdivide_edge(star(3), 0, 2).graph
        u = next(v for v in range(g.num_vertices) if degree(g, v) == 1 and
                 degree(g, g.neighbors(v)[0]) == 2)
        with pytest.raises(TransformError, match="expected 3"):
            pendant_reduce(g, u)

    def test_not_pendant(self):
        with pytest.raises(TransformError, match="expected 1"):
            pendant_reduce(cycle(4), 0)

    def test_parallel_refused(self):
        g = MultiGraph(3, ((0, 1), (0, 1), (0, 2)))
        with pytest.raises(TransformError, match="parallel"):
            pendant_reduce(g, 2)

    def test_multi_pendant_fix(self):
        g = MultiGraph(3, ((0, 1), (0, 1), (0, 2)))
        h = multi_pendant_fix(g, 2).graph
        assert h.num_vertices == 7
        assert ml(h) == ml(g)
        r = pendant_reduce(h, 2).graph
        assert ml(r) == ml(g)

    def test_multi_pendant_fix_needs_parallel(self):
        with pytest.raises(TransformError, match="not parallel"):
            multi_pendant_fix(pendant_triangle(), 3)

    def test_forced_pendant(self):
        # pendant u on degree-2 x attached to a cycle vertex
        g = MultiGraph(6, ((0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5)))
        h = strip_forced_pendant(g, 5).graph
        assert h.num_vertices == 4
        assert ml(h) == ml(g)
        with pytest.raises(TransformError):
            strip_forced_pendant(pendant_triangle(), 3)

    def test_exhaust(self):
        from linepm.lattices import gen_sierpinski_companion

        g = gen_sierpinski_companion(2)
        h, log = exhaust_pendants(g)
        assert 1 not in degree_census(h)
        assert [e.rule for e in log].count("Claim1") >= 1
        assert ml(h) == ml(g)


def _pendant_sites(g):
    out = []
    for u in range(g.num_vertices):
        if degree(g, u) != 1:
            continue
        v = g.neighbors(u)[0]
        if degree(g, v) == 3:
            a, b = [w for w, e in g.incident(v) if w != u]
            if a != b:
                out.append(u)
    return out


def test_claim1_random_corpus():
    rng = random.Random(11)
    checked = 0
    while checked < 200:
        g = random_theorem_instance(rng, 12)
        # hang a pendant in the middle of a random edge
        e = rng.randrange(g.num_edges)
        a, b = g.edges[e]
        n = g.num_vertices
        edges = [x for i, x in enumerate(g.edges) if i != e] + [(a, n), (n, b), (n, n + 1)]
        h = MultiGraph(n + 2, tuple(edges))
        for u in _pendant_sites(h):
            assert ml(pendant_reduce(h, u).graph) == ml(h)
            checked += 1
