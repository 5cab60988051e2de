"""Hexagonal, 3.12.12, Kagome and Sierpinski-gasket instances.

Hexagonal torus coordinates: vertices ``(i, j, s)`` with ``0 <= i <= m``,
``0 <= j <= n``, ``s`` in ``{A, B}``; every ``A(i, j)`` is joined to
``B(i, j)``, to ``B(i, j-1)`` and to ``B(i-1, j)``, indices taken modulo
``n+1`` and ``m+1``.  Edges with ``i = 0`` in the last rule are the
*row seam* (n+1 edges); edges with ``j = 0`` in the second rule are the
*column seam* (m+1 edges).  Cylindrical variants cut the row seam, free
variants cut both seams.

A cut seam edge ``A - B`` becomes two pendant edges ``A - p`` and
``B - q`` (3.12.12 lattices) or a single pendant ``A - p`` with the B half
discarded (Kagome lattices).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

from .graph import Builder, GraphError, MultiGraph, degree_census
from .linegraph import line_graph, subdivide_all

LN2 = math.log(2)

FAMILIES = ("HexT", "R_T", "R_C", "R_F", "K_T", "K_C", "K_F", "SG2", "Gn")

# command-line spellings
FAMILY_ALIASES = {
    "hex-t": "HexT", "r-t": "R_T", "r-c": "R_C", "r-f": "R_F",
    "k-t": "K_T", "k-c": "K_C", "k-f": "K_F", "sg2": "SG2", "gn": "Gn",
}


class DegenerateLatticeWarning(UserWarning):
    """A torus dimension of size one produced parallel wrap edges."""


@dataclass(frozen=True)
class LatticeSpec:
    family: str
    n: int = 0
    m: int = 0
    stage: int = 0

    def __post_init__(self) -> None:
        fam = FAMILY_ALIASES.get(self.family, self.family)
        object.__setattr__(self, "family", fam)
        if fam not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if fam in ("SG2", "Gn"):
            if self.stage < 0:
                raise ValueError("stage must be >= 0")
        elif self.n < 1 or self.m < 1:
            raise ValueError(f"{fam} needs n >= 1 and m >= 1, got n={self.n}, m={self.m}")

    @property
    def label(self) -> str:
        if self.family in ("SG2", "Gn"):
            return f"{self.family}({self.stage})"
        return f"{self.family}({self.n},{self.m})"


# --- hexagonal ------------------------------------------------------------

def _hex(n: int, m: int, cut_rows: bool, cut_cols: bool, keep_b_half: bool) -> MultiGraph:
    if n < 0 or m < 0:
        raise GraphError("hexagonal lattice sizes must be non-negative")
    if n == 0 or m == 0:
        warnings.warn(
            f"H({n},{m}) has a period-1 direction; wrap edges are parallel",
            DegenerateLatticeWarning, stacklevel=3,
        )
    rows, cols = m + 1, n + 1
    b = Builder()
    for i in range(rows):
        for j in range(cols):
            b.vertex(("A", i, j))
            b.vertex(("B", i, j))

    def seam(a_key, b_key, tag) -> None:
        b.edge(a_key, ("pend", tag, "A"))
        if keep_b_half:
            b.edge(b_key, ("pend", tag, "B"))

    for i in range(rows):
        for j in range(cols):
            a = ("A", i, j)
            b.edge(a, ("B", i, j))
            left = ("B", i, (j - 1) % cols)
            if j == 0 and cut_cols:
                seam(a, left, ("col", i))
            else:
                b.edge(a, left)
            up = ("B", (i - 1) % rows, j)
            if i == 0 and cut_rows:
                seam(a, up, ("row", j))
            else:
                b.edge(a, up)
    return b.build()


def gen_hex_torus(n: int, m: int) -> MultiGraph:
    """H^T(n, m): cubic, 2(m+1)(n+1) vertices, 3(m+1)(n+1) edges."""
    return _hex(n, m, False, False, True)


def hex_cylinder_cut(n: int, m: int) -> MultiGraph:
    """Torus with the n+1 row-seam edges each cut into two pendant edges."""
    return _hex(n, m, True, False, True)


def hex_free_cut(n: int, m: int) -> MultiGraph:
    """Torus with both seams cut into pendant pairs (two corners carry two pendants)."""
    return _hex(n, m, True, True, True)


def subdivide_non_pendant(g: MultiGraph) -> MultiGraph:
    """Subdivide once every edge with no degree-1 endpoint."""
    from .graph import degrees

    deg = degrees(g)
    b = Builder()
    for v in range(g.num_vertices):
        b.vertex(v)
    for i, (u, v) in enumerate(g.edges):
        if deg[u] == 1 or deg[v] == 1:
            b.edge(u, v)
        else:
            b.edge(u, ("sub", i))
            b.edge(("sub", i), v)
    return b.build()


def gen_3_12_12(bc: str, n: int, m: int) -> MultiGraph:
    """R^T, R^C or R^F as the line graph of a (cut) subdivided hexagonal torus."""
    _require_positive(n, m)
    bc = bc.upper()
    if bc == "T":
        base = subdivide_all(gen_hex_torus(n, m))
    elif bc == "C":
        base = subdivide_non_pendant(hex_cylinder_cut(n, m))
    elif bc == "F":
        base = subdivide_non_pendant(hex_free_cut(n, m))
    else:
        raise ValueError(f"boundary condition must be T, C or F, got {bc!r}")
    g = line_graph(base).graph
    assert g.num_vertices == 6 * (m + 1) * (n + 1)
    return g


def gen_kagome(bc: str, n: int, m: int) -> MultiGraph:
    """K^T, K^C or K^F as the line graph of H(n-1, 2m-1) with seams
    trimmed to single pendants.  n = 1 gives a period-1 direction, so the
    underlying hexagonal graph has parallel edges; that is expected."""
    _require_positive(n, m)
    bc = bc.upper()
    if bc not in ("T", "C", "F"):
        raise ValueError(f"boundary condition must be T, C or F, got {bc!r}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateLatticeWarning)
        base = _hex(n - 1, 2 * m - 1, bc in "CF", bc == "F", False)
    g = line_graph(base).graph
    if g.num_vertices != 6 * m * n:
        raise AssertionError(f"Kagome {bc}({n},{m}) has {g.num_vertices} vertices, expected {6 * m * n}")
    return g


def kagome_base(bc: str, n: int, m: int) -> MultiGraph:
    """The hexagonal graph whose line graph is the Kagome lattice."""
    bc = bc.upper()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateLatticeWarning)
        return _hex(n - 1, 2 * m - 1, bc in "CF", bc == "F", False)


def r_base(bc: str, n: int, m: int) -> MultiGraph:
    """The subdivided hexagonal graph whose line graph is the 3.12.12 lattice."""
    bc = bc.upper()
    if bc == "T":
        return subdivide_all(gen_hex_torus(n, m))
    if bc == "C":
        return subdivide_non_pendant(hex_cylinder_cut(n, m))
    return subdivide_non_pendant(hex_free_cut(n, m))


def _require_positive(n: int, m: int) -> None:
    if n < 1 or m < 1:
        raise GraphError(f"lattice parameters must be >= 1 (got n={n}, m={m})")


# --- Sierpinski -------------------------------------------------------------

def _companion(stage: int) -> Tuple[MultiGraph, Tuple[int, int, int]]:
    # star K_{1,3}: center 0, corners 1, 2, 3
    g = MultiGraph(4, ((0, 1), (0, 2), (0, 3)))
    corners = (1, 2, 3)
    for _ in range(stage):
        g, corners = _juxtapose(g, corners)
    return g, corners


def _juxtapose(g: MultiGraph, corners: Tuple[int, int, int]) -> Tuple[MultiGraph, Tuple[int, int, int]]:
    """Three copies A, B, C; merge corner pairs A2-B1, B2-C1, C2-A1."""
    size = g.num_vertices
    neighbor = {c: g.neighbors(c)[0] for c in corners}
    c1, c2, c3 = corners
    doomed = set()
    edges = []
    for k in range(3):
        off = k * size
        for u, v in g.edges:
            edges.append((u + off, v + off))
    for k in range(3):
        nk = (k + 1) % 3
        doomed.add(c2 + k * size)
        doomed.add(c1 + nk * size)
        edges.append((neighbor[c2] + k * size, neighbor[c1] + nk * size))
    keep = [v for v in range(3 * size) if v not in doomed]
    remap = {v: i for i, v in enumerate(keep)}
    new_edges = tuple((remap[u], remap[v]) for u, v in edges if u in remap and v in remap)
    new_corners = tuple(remap[c3 + k * size] for k in range(3))
    return MultiGraph(len(keep), new_edges), new_corners


def gen_sierpinski_companion(stage: int) -> MultiGraph:
    """G_n: 3^n + 3 vertices (3^n cubic, 3 pendant), (3/2)(3^n + 1) edges."""
    if stage < 0:
        raise GraphError("stage must be >= 0")
    g, _ = _companion(stage)
    p = 3 ** stage
    assert g.num_vertices == p + 3
    assert 2 * g.num_edges == 3 * (p + 1)
    assert degree_census(g) == {3: p, 1: 3}
    return g


def gen_sierpinski(stage: int) -> MultiGraph:
    """SG_2(n) = L(G_n): (3/2)(3^n + 1) vertices, 3^(n+1) edges."""
    g = line_graph(gen_sierpinski_companion(stage)).graph
    assert 2 * g.num_vertices == 3 * (3 ** stage + 1)
    assert g.num_edges == 3 ** (stage + 1)
    return g


# --- dispatch ---------------------------------------------------------------

def generate(spec: LatticeSpec) -> MultiGraph:
    f = spec.family
    if f == "HexT":
        return gen_hex_torus(spec.n, spec.m)
    if f.startswith("R_"):
        return gen_3_12_12(f[2], spec.n, spec.m)
    if f.startswith("K_"):
        return gen_kagome(f[2], spec.n, spec.m)
    if f == "SG2":
        return gen_sierpinski(spec.stage)
    if f == "Gn":
        return gen_sierpinski_companion(spec.stage)
    raise ValueError(f)


def counted_graph(spec: LatticeSpec) -> MultiGraph:
    """The graph whose matchings :func:`predict` describes.

    For the lattices this is the generated graph; for ``HexT`` and ``Gn``,
    whose own matchings are not the object of interest, it is their line
    graph.
    """
    g = generate(spec)
    if spec.family in ("HexT", "Gn"):
        return line_graph(g).graph
    return g


# --- predictions ------------------------------------------------------------

@dataclass(frozen=True)
class FamilyPrediction:
    pow2_exponent: Optional[int]        # None: predicted count is 0
    entropy_limit: float
    normalizer: str

    @property
    def value(self) -> int:
        return 0 if self.pow2_exponent is None else 1 << self.pow2_exponent


VERTEX_NORMALIZER = "vertices"
R_NORMALIZER = "paper_3_12_12"

ENTROPY_SG2 = 2 * LN2 / 3
ENTROPY_3_12_12 = LN2 / 3
ENTROPY_KAGOME = 2 * LN2 / 3
ENTROPY_CLIQUE_INSERTED = LN2 / 3
ENTROPY_CUBIC_LINE = 2 * LN2 / 3


def predict(spec: LatticeSpec) -> FamilyPrediction:
    f, n, m = spec.family, spec.n, spec.m
    if f in ("SG2", "Gn"):
        s = spec.stage
        exp = (3 ** s - 1) // 2 if s % 2 else None
        return FamilyPrediction(exp, ENTROPY_SG2, VERTEX_NORMALIZER)
    if f == "HexT":
        # L of a cubic graph with 3(m+1)(n+1) edges
        cells = (m + 1) * (n + 1)
        exp = cells + 1 if cells % 2 == 0 else None
        return FamilyPrediction(exp, ENTROPY_CUBIC_LINE, VERTEX_NORMALIZER)
    if f == "R_T":
        return FamilyPrediction(m * n + m + n + 2, ENTROPY_3_12_12, R_NORMALIZER)
    if f == "R_C":
        return FamilyPrediction(m * n + m + 1, ENTROPY_3_12_12, R_NORMALIZER)
    if f == "R_F":
        return FamilyPrediction(m * n, ENTROPY_3_12_12, R_NORMALIZER)
    if f == "K_T":
        return FamilyPrediction(2 * m * n + 1, ENTROPY_KAGOME, VERTEX_NORMALIZER)
    if f == "K_C":
        return FamilyPrediction(2 * m * n - n + 1, ENTROPY_KAGOME, VERTEX_NORMALIZER)
    if f == "K_F":
        return FamilyPrediction(2 * m * n - 2 * m - n + 1, ENTROPY_KAGOME, VERTEX_NORMALIZER)
    raise ValueError(f)


def predict_clique_inserted(nu: int) -> FamilyPrediction:
    """L(S(G)) for a connected cubic G on ``nu`` vertices."""
    return FamilyPrediction(nu // 2 + 1, ENTROPY_CLIQUE_INSERTED, VERTEX_NORMALIZER)


def predict_cubic_line_graph(nu: int, num_edges: int) -> FamilyPrediction:
    """L(G) for a connected cubic G; zero when |E(G)| is odd."""
    exp = nu // 2 + 1 if num_edges % 2 == 0 else None
    return FamilyPrediction(exp, ENTROPY_CUBIC_LINE, VERTEX_NORMALIZER)


def finite_entropy(
    g: MultiGraph,
    count: int,
    normalizer: str = VERTEX_NORMALIZER,
    spec: Optional[LatticeSpec] = None,
) -> float:
    """2 ln(count) / |V|, or ln(count) / (3(m+1)(n+1)) for the 3.12.12 normalizer."""
    value = getattr(count, "value", count)
    if value <= 0:
        raise ValueError("entropy is undefined for a zero count")
    if normalizer == VERTEX_NORMALIZER:
        return 2 * math.log(value) / g.num_vertices
    if normalizer == R_NORMALIZER:
        if spec is None or not spec.family.startswith("R_"):
            raise ValueError("the 3.12.12 normalizer needs a 3.12.12 LatticeSpec")
        return math.log(value) / (3 * (spec.m + 1) * (spec.n + 1))
    raise ValueError(f"unknown normalizer {normalizer!r}")


def closed_form_entropy(spec: LatticeSpec) -> Optional[float]:
    """The finite-size entropy implied by :func:`predict`, without building the graph."""
    p = predict(spec)
    if p.pow2_exponent is None:
        return None
    f, n, m = spec.family, spec.n, spec.m
    if p.normalizer == R_NORMALIZER:
        return p.pow2_exponent * LN2 / (3 * (m + 1) * (n + 1))
    if f.startswith("K_"):
        size = 6 * m * n
    elif f in ("SG2", "Gn"):
        size = 3 * (3 ** spec.stage + 1) // 2
    else:  # HexT line graph
        size = 3 * (m + 1) * (n + 1)
    return 2 * p.pow2_exponent * LN2 / size
