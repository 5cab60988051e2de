import math
import warnings

import pytest

from linepm.counters import count_brute, count_frontier
from linepm.graph import GraphError, degree_census, is_connected, star
from linepm.lattices import (
    DegenerateLatticeWarning,
    ENTROPY_3_12_12,
    ENTROPY_CLIQUE_INSERTED,
    ENTROPY_KAGOME,
    ENTROPY_SG2,
    LatticeSpec,
    R_NORMALIZER,
    closed_form_entropy,
    counted_graph,
    finite_entropy,
    gen_3_12_12,
    gen_hex_torus,
    gen_kagome,
    gen_sierpinski,
    gen_sierpinski_companion,
    generate,
    hex_cylinder_cut,
    hex_free_cut,
    predict,
    predict_clique_inserted,
    predict_cubic_line_graph,
)
from linepm.linegraph import clique_inserted, is_cubic, line_graph, subdivide_all

LN2 = math.log(2)
GRID = [(1, 1), (1, 2), (2, 1), (2, 2)]


class TestHex:
    def test_1_1(self):
        g = gen_hex_torus(1, 1)
        assert (g.num_vertices, g.num_edges) == (8, 12)
        assert is_cubic(g) and is_connected(g)

    @pytest.mark.parametrize("n, m", GRID + [(3, 2)])
    def test_census(self, n, m):
        assert degree_census(gen_hex_torus(n, m)) == {3: 2 * (m + 1) * (n + 1)}

    @pytest.mark.parametrize("n, m", GRID)
    def test_count_via_subdivision(self, n, m):
        g = line_graph(subdivide_all(gen_hex_torus(n, m))).graph
        assert count_frontier(g).value == 2 ** (m * n + m + n + 2)

    def test_degenerate_warns(self):
        with pytest.warns(DegenerateLatticeWarning):
            g = gen_hex_torus(0, 1)
        assert is_cubic(g) and not g.is_simple()

    def test_cut_censuses(self):
        # n+1 row-seam edges cut into pendant pairs
        g = hex_cylinder_cut(2, 1)
        assert degree_census(g) == {1: 2 * 3, 3: 2 * 2 * 3}
        f = hex_free_cut(2, 1)
        assert degree_census(f)[1] == 2 * (3 + 2)

    def test_rejects_negative(self):
        with pytest.raises(GraphError):
            hex_free_cut(-1, 1)


class TestR:
    @pytest.mark.parametrize("bc", "TCF")
    @pytest.mark.parametrize("n, m", GRID)
    def test_size(self, bc, n, m):
        assert gen_3_12_12(bc, n, m).num_vertices == 6 * (m + 1) * (n + 1)

    def test_examples(self):
        assert count_frontier(gen_3_12_12("T", 1, 1)).value == 32
        assert count_frontier(gen_3_12_12("C", 1, 1)).value == 8
        assert count_frontier(gen_3_12_12("F", 1, 1)).value == 2

    def test_torus_is_clique_inserted(self):
        a = gen_3_12_12("T", 2, 1)
        b = clique_inserted(gen_hex_torus(2, 1))
        assert a == b

    def test_bad_bc(self):
        with pytest.raises(ValueError):
            gen_3_12_12("X", 1, 1)
        with pytest.raises(GraphError):
            gen_3_12_12("T", 0, 1)


class TestKagome:
    @pytest.mark.parametrize("bc", "TCF")
    @pytest.mark.parametrize("n, m", GRID + [(3, 2)])
    def test_size(self, bc, n, m):
        g = gen_kagome(bc, n, m)
        assert g.num_vertices == 6 * m * n

    def test_torus_degrees(self):
        assert degree_census(gen_kagome("T", 2, 2)) == {4: 24}

    def test_examples(self):
        assert count_brute(gen_kagome("T", 1, 1)).value == 8
        assert count_brute(gen_kagome("C", 1, 1)).value == 4
        assert count_brute(gen_kagome("F", 1, 1)).value == 1

    def test_no_warning_leaks(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            gen_kagome("T", 1, 3)


class TestSierpinski:
    def test_stage0_star(self):
        g = gen_sierpinski_companion(0)
        assert degree_census(g) == degree_census(star(3))

    def test_stage1(self):
        g = gen_sierpinski_companion(1)
        assert (g.num_vertices, g.num_edges) == (6, 6)
        assert degree_census(g) == {1: 3, 3: 3}

    def test_stage2(self):
        g = gen_sierpinski_companion(2)
        assert (g.num_vertices, g.num_edges) == (12, 15)
        assert is_connected(g)

    @pytest.mark.parametrize("stage, verts, count", [(0, 3, 0), (1, 6, 2), (2, 15, 0), (3, 42, 8192)])
    def test_gasket(self, stage, verts, count):
        g = gen_sierpinski(stage)
        assert g.num_vertices == verts
        assert g.num_edges == 3 ** (stage + 1)
        assert count_frontier(g).value == count

    def test_stage0_triangle(self):
        g = gen_sierpinski(0)
        assert degree_census(g) == {2: 3}

    def test_negative(self):
        with pytest.raises(GraphError):
            gen_sierpinski_companion(-1)


class TestSpec:
    def test_aliases(self):
        assert LatticeSpec("k-t", 1, 1).family == "K_T"
        assert LatticeSpec("sg2", stage=3).label == "SG2(3)"
        assert LatticeSpec("R_C", 2, 3).label == "R_C(2,3)"

    @pytest.mark.parametrize("kw", [dict(family="nope"), dict(family="R_T", n=0, m=1),
                                    dict(family="SG2", stage=-1)])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            LatticeSpec(**kw)


class TestPredict:
    def test_examples(self):
        assert predict(LatticeSpec("R_T", 2, 3)).pow2_exponent == 13
        p = predict(LatticeSpec("SG2", stage=2))
        assert p.pow2_exponent is None and p.value == 0
        assert predict(LatticeSpec("K_T", 2, 2)).pow2_exponent == 9

    @pytest.mark.parametrize("fam", ["R_T", "R_C", "R_F", "K_T", "K_C", "K_F"])
    @pytest.mark.parametrize("n, m", GRID)
    def test_grid_sweep(self, fam, n, m):
        spec = LatticeSpec(fam, n, m)
        assert count_frontier(counted_graph(spec)).value == predict(spec).value

    @pytest.mark.parametrize("fam", ["R_T", "K_T", "K_C", "K_F", "R_C", "R_F"])
    @pytest.mark.parametrize("n, m", [(3, 1), (1, 3), (3, 2)])
    def test_larger(self, fam, n, m):
        spec = LatticeSpec(fam, n, m)
        assert count_frontier(counted_graph(spec)).value == predict(spec).value

    @pytest.mark.parametrize("stage", range(5))
    def test_sierpinski(self, stage):
        for fam in ("SG2", "Gn"):
            spec = LatticeSpec(fam, stage=stage)
            assert count_frontier(counted_graph(spec)).value == predict(spec).value

    @pytest.mark.parametrize("n, m", [(1, 1), (1, 2), (2, 2), (3, 1)])
    def test_hex_line_graph(self, n, m):
        spec = LatticeSpec("HexT", n, m)
        assert count_frontier(counted_graph(spec)).value == predict(spec).value

    def test_clique_inserted_and_cubic(self):
        from linepm.graph import complete

        assert predict_clique_inserted(4).value == 8
        assert predict_cubic_line_graph(4, 6).value == count_brute(line_graph(complete(4)).graph).value
        assert predict_cubic_line_graph(6, 9).value == 0


class TestEntropy:
    def test_sg3(self):
        g = gen_sierpinski(3)
        assert finite_entropy(g, 8192) == pytest.approx(2 * 13 * LN2 / 42, abs=1e-12)

    def test_kt22(self):
        g = gen_kagome("T", 2, 2)
        assert finite_entropy(g, 2 ** 9) == pytest.approx(0.75 * LN2, abs=1e-12)

    def test_rt11_paper_normalizer(self):
        spec = LatticeSpec("R_T", 1, 1)
        g = generate(spec)
        assert finite_entropy(g, 32, R_NORMALIZER, spec) == pytest.approx(5 * LN2 / 12, abs=1e-12)
        # both normalizers agree on 3.12.12 lattices
        assert finite_entropy(g, 32) == pytest.approx(5 * LN2 / 12, abs=1e-12)

    def test_errors(self):
        with pytest.raises(ValueError):
            finite_entropy(gen_sierpinski(2), 0)
        with pytest.raises(ValueError):
            finite_entropy(gen_sierpinski(1), 2, R_NORMALIZER)
        with pytest.raises(ValueError):
            finite_entropy(gen_sierpinski(1), 2, "bogus")

    def test_limits(self):
        assert ENTROPY_3_12_12 == pytest.approx(LN2 / 3)
        assert ENTROPY_KAGOME == ENTROPY_SG2 == pytest.approx(2 * LN2 / 3)
        assert ENTROPY_CLIQUE_INSERTED == pytest.approx(LN2 / 3)

    @pytest.mark.parametrize("fam", ["R_T", "R_C", "R_F", "K_T", "K_C", "K_F"])
    def test_closed_form_matches_count(self, fam):
        for k in range(1, 5):
            spec = LatticeSpec(fam, k, k)
            g = counted_graph(spec)
            c = count_frontier(g).value
            norm = predict(spec).normalizer
            assert finite_entropy(g, c, norm, spec) == pytest.approx(closed_form_entropy(spec), abs=1e-12)

    @pytest.mark.parametrize("fam, start", [("R_T", 1), ("R_C", 1), ("R_F", 1), ("K_T", 1),
                                            ("K_C", 2), ("K_F", 1)])
    def test_diagonal_approaches_limit(self, fam, start):
        vals = [closed_form_entropy(LatticeSpec(fam, k, k)) for k in range(start, 40)]
        limit = predict(LatticeSpec(fam, 1, 1)).entropy_limit
        gaps = [abs(v - limit) for v in vals]
        assert all(b < a for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 0.02

    def test_kagome_cylinder_first_step(self):
        # the smallest cylinder sits exactly on the limit before dipping below it
        assert closed_form_entropy(LatticeSpec("K_C", 1, 1)) == pytest.approx(ENTROPY_KAGOME)
        assert closed_form_entropy(LatticeSpec("K_C", 2, 2)) < ENTROPY_KAGOME

    def test_sierpinski_odd_stages(self):
        vals = [closed_form_entropy(LatticeSpec("SG2", stage=s)) for s in (1, 3, 5, 7, 9, 11)]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert vals[-1] == pytest.approx(ENTROPY_SG2, abs=1e-4)
        assert closed_form_entropy(LatticeSpec("SG2", stage=2)) is None
