"""``linepm`` command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 usage or input error,
3 resource cap hit (brute force above the vertex guard, frontier above
the width cap).  ``--force`` lifts both guards.

verify CSV columns, in this order::

    family,n,m,stage,predicted_exponent,predicted_count,counted,algorithm,agree,elapsed_s

``predicted_exponent`` is blank when the predicted count is 0.  Rows that
hit a resource cap have a blank ``counted``, ``algorithm`` set to
``capped`` and ``agree`` set to ``skipped``; they do not affect the exit
status.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .corpus import random_cubic_multigraph, random_theorem_instance, seeded
from .counters import (
    CountResult,
    FrontierWidthError,
    count_brute,
    count_frontier,
    default_width_cap,
    frontier_width,
    low_width_order,
)
from .graph import GraphError, MultiGraph, degree_census, dumps, format_edge_list, loads
from .lattices import (
    ENTROPY_CLIQUE_INSERTED,
    FAMILY_ALIASES,
    LatticeSpec,
    counted_graph,
    closed_form_entropy,
    finite_entropy,
    gen_hex_torus,
    generate,
    predict,
    predict_clique_inserted,
)
from .linegraph import clique_inserted, line_graph, subdivide_all
from .reduction import InstanceError, StepCheckError, reduce, reduce_with_pendants, replay_trace
from .transforms import TransformError, exhaust_pendants, subdivide_edge

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
BRUTE_VERTEX_GUARD = 36

VERIFY_COLUMNS = (
    "family", "n", "m", "stage", "predicted_exponent", "predicted_count",
    "counted", "algorithm", "agree", "elapsed_s",
)
RANDOM_FAMILIES = ("random-cubic", "random-instance")


class CapError(Exception):
    """A size guard refused the job."""


# --- helpers ----------------------------------------------------------------

def parse_range(text: str) -> List[int]:
    """``"3"`` -> [3], ``"1..3"`` -> [1, 2, 3], ``"1,4"`` -> [1, 4]."""
    out: List[int] = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                a, b = int(lo), int(hi)
                if b < a:
                    raise ValueError
                out.extend(range(a, b + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; use N, A..B or A,B,...") from None
    return out


def _family(text: str) -> str:
    key = text.lower()
    if key in FAMILY_ALIASES:
        return FAMILY_ALIASES[key]
    if text in FAMILY_ALIASES.values():
        return text
    raise argparse.ArgumentTypeError(
        f"unknown family {text!r}; choose from {', '.join(FAMILY_ALIASES)}"
    )


def read_graph(path: str) -> Tuple[MultiGraph, dict]:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return loads(text)


def write_text(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def write_graph(g: MultiGraph, out: Optional[str], fmt: str, meta: Optional[dict] = None) -> None:
    write_text(format_edge_list(g) if fmt == "edgelist" else dumps(g, meta), out)


def guarded_count(g: MultiGraph, algo: str, force: bool, width_cap: Optional[int]) -> CountResult:
    """Count with the size guards; raises :class:`CapError` when refused."""
    cap = default_width_cap() if width_cap is None else width_cap
    if algo == "brute":
        if g.num_vertices > BRUTE_VERTEX_GUARD and not force:
            raise CapError(
                f"brute force refuses {g.num_vertices} > {BRUTE_VERTEX_GUARD} vertices; "
                "use --algo frontier or --force"
            )
        return count_brute(g)
    order = low_width_order(g)
    width = frontier_width(g, order) if order else 0
    if algo == "frontier":
        try:
            return count_frontier(g, order, width_cap=max(cap, width) if force else cap)
        except FrontierWidthError as exc:
            raise CapError(str(exc)) from None
    if width <= cap:
        return count_frontier(g, order, width_cap=cap)
    if g.num_vertices <= BRUTE_VERTEX_GUARD or force:
        return count_brute(g)
    raise CapError(
        f"frontier width {width} exceeds cap {cap} and {g.num_vertices} vertices exceed the "
        f"brute-force guard; raise --width-cap or pass --force"
    )


# --- gen --------------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.family in RANDOM_FAMILIES:
        rng = seeded(args.seed)
        if args.family == "random-cubic":
            g = random_cubic_multigraph(args.nu, rng)
            params = {"nu": args.nu, "seed": args.seed}
        else:
            g = random_theorem_instance(rng, args.max_edges)
            params = {"max_edges": args.max_edges, "seed": args.seed}
        meta = {"family": args.family, "params": params}
    else:
        try:
            spec = LatticeSpec(args.family, args.n, args.m, args.stage)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        g = generate(spec)
        p = predict(spec)
        if spec.family in ("SG2", "Gn"):
            params = {"stage": spec.stage}
        else:
            params = {"n": spec.n, "m": spec.m}
        meta = {
            "family": spec.family,
            "params": params,
            "predicted_exponent": p.pow2_exponent,
            "predicted_for": "line_graph" if spec.family in ("HexT", "Gn") else "graph",
        }
    write_graph(g, args.out, args.format, meta)
    return EXIT_OK


# --- count ------------------------------------------------------------------

def cmd_count(args) -> int:
    g, _ = read_graph(args.input)
    try:
        c = guarded_count(g, args.algo, args.force, args.width_cap)
    except CapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    if args.format == "json":
        doc = {
            "num_vertices": g.num_vertices,
            "num_edges": g.num_edges,
            "count": c.value,
            "pow2_exponent": c.pow2_exponent,
            "algorithm": c.algorithm,
        }
        print(json.dumps(doc, sort_keys=True))
    else:
        print(c.value)
    return EXIT_OK


# --- trace / replay ---------------------------------------------------------

def cmd_trace(args) -> int:
    g, _ = read_graph(args.input)
    try:
        if args.pendant_fix or args.strip_forced:
            trace = reduce_with_pendants(g, args.check_steps, strip_forced=args.strip_forced)
        else:
            trace = reduce(g, args.check_steps)
    except InstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StepCheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    if args.out:
        write_text(trace.to_json(), args.out)
    k = trace.claimed_count.pow2_exponent
    checked = len(trace.checks())
    print(f"M(L(G)) = 2^{k}, k = n/2+1, n = {trace.root.n3}")
    print(f"steps: {trace.num_steps}, checked: {checked}, preprocessing: {len(trace.preprocessing)}",
          file=sys.stderr)
    return EXIT_OK


def cmd_replay(args) -> int:
    text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
    try:
        rep = replay_trace(text, args.max_vertices)
    except (KeyError, ValueError) as exc:
        print(f"error: malformed trace: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for e in rep.errors:
        print(e, file=sys.stderr)
    print(f"checked {rep.steps_checked}, skipped {rep.steps_skipped}, "
          f"{'ok' if rep.ok else f'{len(rep.errors)} errors'}")
    return EXIT_OK if rep.ok else EXIT_MISMATCH


# --- verify -----------------------------------------------------------------

def verify_row(spec: LatticeSpec, algo: str, force: bool, width_cap: Optional[int]) -> dict:
    p = predict(spec)
    g = counted_graph(spec)
    t0 = time.perf_counter()
    try:
        c = guarded_count(g, algo, force, width_cap)
        counted, alg = c.value, c.algorithm
        agree = "yes" if c.value == p.value else "no"
    except CapError:
        counted, alg, agree = None, "capped", "skipped"
    elapsed = time.perf_counter() - t0
    sg = spec.family in ("SG2", "Gn")
    return {
        "family": spec.family,
        "n": None if sg else spec.n,
        "m": None if sg else spec.m,
        "stage": spec.stage if sg else None,
        "predicted_exponent": p.pow2_exponent,
        "predicted_count": p.value,
        "counted": counted,
        "algorithm": alg,
        "agree": agree,
        "elapsed_s": round(elapsed, 6),
    }


def _verify_job(job):
    return verify_row(*job)


def _sort_key(row: dict):
    return (row["family"], row["n"] or 0, row["m"] or 0, row["stage"] or 0)


def verify_specs(families: Sequence[str], ns, ms, stages) -> List[LatticeSpec]:
    specs = []
    for fam in families:
        if fam in ("SG2", "Gn"):
            specs.extend(LatticeSpec(fam, stage=s) for s in stages)
        else:
            specs.extend(LatticeSpec(fam, n, m) for n in ns for m in ms)
    return specs


def cmd_verify(args) -> int:
    try:
        specs = verify_specs(args.family, args.n, args.m, args.stage)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    jobs = [(s, args.algo, args.force, args.width_cap) for s in specs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_verify_job, jobs))
    else:
        rows = [_verify_job(j) for j in jobs]
    rows.sort(key=_sort_key)
    summary = {
        "rows": len(rows),
        "agree": sum(r["agree"] == "yes" for r in rows),
        "disagree": sum(r["agree"] == "no" for r in rows),
        "capped": sum(r["agree"] == "skipped" for r in rows),
    }
    if args.format == "json":
        print(json.dumps({"rows": rows, "summary": summary}, indent=1))
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=VERIFY_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: "" if r[k] is None else r[k] for k in VERIFY_COLUMNS})
        sys.stdout.write(buf.getvalue())
        print(f"{summary['rows']} rows: {summary['agree']} agree, {summary['disagree']} disagree, "
              f"{summary['capped']} capped", file=sys.stderr)
    return EXIT_MISMATCH if summary["disagree"] else EXIT_OK


# --- entropy ----------------------------------------------------------------

ENTROPY_COLUMNS = ("family", "size", "vertices", "exponent", "entropy", "closed_form", "limit")


def entropy_row(family: str, size: int, normalizer: str, force: bool,
                width_cap: Optional[int]) -> dict:
    if family == "CI":
        g = clique_inserted(gen_hex_torus(size, size))
        p = predict_clique_inserted(2 * (size + 1) ** 2)
        spec = None
        closed = 2 * p.pow2_exponent * math.log(2) / g.num_vertices
        limit = ENTROPY_CLIQUE_INSERTED
    else:
        if family in ("SG2", "Gn"):
            spec = LatticeSpec(family, stage=size)
        else:
            spec = LatticeSpec(family, size, size)
        g = counted_graph(spec)
        p = predict(spec)
        closed = closed_form_entropy(spec)
        limit = p.entropy_limit
    c = guarded_count(g, "auto", force, width_cap)
    # on 3.12.12 lattices both normalizers agree since |V| = 6(m+1)(n+1)
    norm = normalizer if (spec is not None and spec.family.startswith("R_")) else "vertices"
    ent = finite_entropy(g, c.value, norm, spec) if c.value > 0 else None
    return {
        "family": family,
        "size": size,
        "vertices": g.num_vertices,
        "exponent": c.pow2_exponent,
        "entropy": ent,
        "closed_form": closed,
        "limit": limit,
    }


def cmd_entropy(args) -> int:
    rows = []
    try:
        for fam in args.family:
            sizes = args.stages if fam in ("SG2", "Gn") else args.sizes
            for s in sizes:
                rows.append(entropy_row(fam, s, args.normalizer, args.force, args.width_cap))
    except CapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        print(json.dumps(rows, indent=1))
        return EXIT_OK
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=ENTROPY_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt(r[k]) for k in ENTROPY_COLUMNS})
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.15f}"
    return str(x)


# --- graph rewrites ---------------------------------------------------------

def cmd_linegraph(args) -> int:
    g, _ = read_graph(args.input)
    res = line_graph(g)
    meta = {"operation": "line_graph", "origin_edge": list(res.origin_edge)}
    write_graph(res.graph, args.out, args.format, meta)
    return EXIT_OK


def cmd_subdivide(args) -> int:
    g, _ = read_graph(args.input)
    if args.edge is None:
        h = subdivide_all(g)
        meta = {"operation": "subdivide_all"}
    else:
        try:
            h = subdivide_edge(g, args.edge, args.times).graph
        except TransformError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        meta = {"operation": "subdivide_edge", "edge": args.edge, "times": args.times}
    write_graph(h, args.out, args.format, meta)
    return EXIT_OK


def cmd_pendant_fix(args) -> int:
    g, _ = read_graph(args.input)
    h, log = exhaust_pendants(g, strip_forced=args.strip_forced)
    for entry in log:
        print(f"{entry.rule} at vertex {entry.vertex}: {entry.before.num_vertices} -> "
              f"{entry.after.num_vertices} vertices", file=sys.stderr)
    census = {str(k): v for k, v in degree_census(h).items()}
    meta = {"operation": "pendant_fix", "rules": [e.rule for e in log], "degree_census": census}
    write_graph(h, args.out, args.format, meta)
    return EXIT_OK


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="linepm",
        description="Perfect matchings of line graphs: generators, counters and checkers.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", "-o", help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "edgelist"), default="json")

    def add_caps(p):
        p.add_argument("--force", action="store_true", help="ignore size guards")
        p.add_argument("--width-cap", type=int, default=None,
                       help="frontier width cap (default $LINEPM_WIDTH_CAP or 26)")

    p = sub.add_parser("gen", help="generate a lattice or a seeded random graph")
    p.add_argument("--family", required=True,
                   type=lambda s: s if s in RANDOM_FAMILIES else _family(s))
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--stage", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nu", type=int, default=8, help="vertices for random-cubic")
    p.add_argument("--max-edges", type=int, default=14, help="edge budget for random-instance")
    add_out(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("count", help="count perfect matchings")
    p.add_argument("input", help="graph file (JSON or 'p N M' edge list), '-' for stdin")
    p.add_argument("--algo", choices=("auto", "brute", "frontier"), default="auto")
    p.add_argument("--format", choices=("plain", "json"), default="plain")
    add_caps(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("trace", help="run the reduction engine on a {2,3}-degree graph")
    p.add_argument("input")
    p.add_argument("--check-steps", type=int, default=None, metavar="N",
                   help="brute-verify every step on at most N vertices")
    p.add_argument("--out", "-o", help="write the JSON trace here")
    p.add_argument("--pendant-fix", action="store_true", help="exhaust pendant reductions first")
    p.add_argument("--strip-forced", action="store_true",
                   help="also remove pendants on degree-2 vertices (implies --pendant-fix)")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("replay", help="re-verify a saved trace independently")
    p.add_argument("input")
    p.add_argument("--max-vertices", type=int, default=None)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("verify", help="sweep lattice formulas against exact counts")
    p.add_argument("--family", required=True, nargs="+", type=_family)
    p.add_argument("--n", type=parse_range, default=[1, 2])
    p.add_argument("--m", type=parse_range, default=[1, 2])
    p.add_argument("--stage", type=parse_range, default=[0, 1, 2, 3])
    p.add_argument("--algo", choices=("auto", "brute", "frontier"), default="auto")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=1)
    add_caps(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("entropy", help="finite-size entropies along the diagonal n = m")
    p.add_argument("--family", required=True, nargs="+",
                   type=lambda s: "CI" if s.lower() == "ci" else _family(s))
    p.add_argument("--sizes", type=parse_range, default=[1, 2, 3])
    p.add_argument("--stages", type=parse_range, default=[1, 3])
    p.add_argument("--normalizer", choices=("paper_3_12_12", "vertices"), default="paper_3_12_12",
                   help="3.12.12 rows only: ln M / (3(m+1)(n+1)) or 2 ln M / |V|")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    add_caps(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("linegraph", help="write L(G)")
    p.add_argument("input")
    add_out(p)
    p.set_defaults(func=cmd_linegraph)

    p = sub.add_parser("subdivide", help="subdivide one edge, or every edge once")
    p.add_argument("input")
    p.add_argument("--edge", type=int, default=None, help="edge id (default: all edges once)")
    p.add_argument("--times", type=int, default=1)
    add_out(p)
    p.set_defaults(func=cmd_subdivide)

    p = sub.add_parser("pendant-fix", help="exhaust pendant reductions")
    p.add_argument("input")
    p.add_argument("--strip-forced", action="store_true")
    add_out(p)
    p.set_defaults(func=cmd_pendant_fix)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
