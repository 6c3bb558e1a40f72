"""Command-line entry point: ``spectral-kmatch <subcommand> ...``.

Exit codes: 0 success, 1 negative decision or counterexample found, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import extremal as ex
from .enumerate import enumerate_connected
from .graph import Graph, GraphInputError, UnsupportedError, complete, copies, disjoint_union, join
from .io import parse_edge_list, parse_graph6, to_graph6
from .matching import (
    MAX_WITNESS_K,
    MAX_WITNESS_ORDER,
    find_fractional_pm_witness,
    find_k_matching_witness,
    has_fractional_pm_fast,
    has_fractional_pm_oracle,
    has_perfect_k_matching,
    perfect_matching_witness,
)
from .spectral import Tolerance, char_poly, largest_real_root, quotient_matrix, spectral_radius
from .verify import SampleSpec, TheoremRunConfig, verify_theorem, write_report

WORKERS_ENV = "SPECTRAL_KMATCH_WORKERS"


# -- the --build expression language ------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(K)|([()])|([uv∪∨])|(\{)|(\}))")


def _tokenize(text: str) -> list[str]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise GraphInputError(f"unexpected character {text[pos]!r} at position {pos} in build expression")
        out.append(next(g for g in m.groups() if g is not None))
        pos = m.end()
    return out


def parse_build(text: str) -> Graph:
    """Parse e.g. ``K1 v (K5 u 2K1)``; ``u`` (union) binds tighter than ``v`` (join)."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise GraphInputError(f"build expression: expected {expected or 'token'}, got {tok!r}")
        pos += 1
        return tok

    def number() -> int:
        if peek() == "{":
            take("{")
            v = number()
            take("}")
            return v
        tok = take()
        if not tok.isdigit():
            raise GraphInputError(f"build expression: expected a number, got {tok!r}")
        return int(tok)

    def atom() -> Graph:
        if peek() == "(":
            take("(")
            g = expr()
            take(")")
            return g
        take("K")
        return complete(number())

    def term() -> Graph:
        if peek() is not None and (peek().isdigit() or peek() == "{"):
            m = number()
            return copies(m, atom())
        return atom()

    def union() -> Graph:
        g = term()
        while peek() in ("u", "∪"):
            take()
            g = disjoint_union(g, term())
        return g

    def expr() -> Graph:
        g = union()
        while peek() in ("v", "∨"):
            take()
            g = join(g, union())
        return g

    g = expr()
    if pos != len(tokens):
        raise GraphInputError(f"build expression: trailing input at token {tokens[pos]!r}")
    return g


# -- helpers --------------------------------------------------------------------

def _tolerance(args) -> Tolerance:
    return Tolerance(eig_tol=args.eig_tol, cmp_tol=args.tol, max_iter=args.max_iter)


def _graph_from_args(args) -> Graph:
    if args.graph6:
        return parse_graph6(args.graph6)
    if args.edges:
        text = sys.stdin.read() if args.edges == "-" else open(args.edges).read()
        return parse_edge_list(text)
    return parse_build(args.build)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _fmt_set(s) -> str:
    return "{" + ", ".join(map(str, s)) + "}" if s else "∅"


# -- subcommands ------------------------------------------------------------------

def cmd_radius(args) -> int:
    g = _graph_from_args(args)
    rho = spectral_radius(g, _tolerance(args))
    _emit(args, {"graph6": to_graph6(g), "n": g.n, "m": g.num_edges, "rho": rho}, f"rho = {rho!r}")
    return 0


def cmd_quotient(args) -> int:
    g = _graph_from_args(args)
    blocks = [[int(v) for v in b.split(",") if v.strip()] for b in args.partition.split("|")]
    q = quotient_matrix(g, blocks)
    poly = char_poly(q)
    rows = [[str(x) for x in r] for r in q.entries]
    payload = {"entries": rows, "block_sizes": list(q.block_sizes), "equitable": q.equitable, "poly": str(poly)}
    text = "\n".join(" ".join(r) for r in rows)
    text += f"\nequitable: {q.equitable}\ncharacteristic polynomial: {poly}"
    if q.equitable:
        root = largest_real_root(poly, None, _tolerance(args))
        payload["largest_root"] = root
        text += f"\nlargest root: {root!r}"
    _emit(args, payload, text)
    return 0


def cmd_kmatch(args) -> int:
    g = _graph_from_args(args)
    ok, cert = has_perfect_k_matching(g, args.k)
    payload = {"graph6": to_graph6(g), "k": args.k, "exists": ok}
    if ok:
        w = None
        if g.n <= MAX_WITNESS_ORDER and args.k <= MAX_WITNESS_K:
            w = find_k_matching_witness(g, args.k)
        if w is None:
            w = perfect_matching_witness(g, args.k)
        payload["witness"] = w.to_json() if w else None
        text = f"perfect {args.k}-matching exists"
        if w:
            text += "; weights " + " ".join(f"{u}-{v}:{x}" for (u, v), x in sorted(w.weights.items()))
        _emit(args, payload, text)
        return 0
    payload["certificate"] = cert.to_json()
    _emit(args, payload, f"no perfect {args.k}-matching; certificate S={_fmt_set(cert.S)}, slack {cert.slack}")
    return 1


def cmd_fpm(args) -> int:
    g = _graph_from_args(args)
    fast = has_fractional_pm_fast(g)
    payload = {"graph6": to_graph6(g), "exists": fast}
    if fast:
        w = find_fractional_pm_witness(g)
        payload["witness"] = w.to_json()
        _emit(args, payload, "fractional perfect matching exists; weights "
              + " ".join(f"{u}-{v}:{x}" for (u, v), x in sorted(w.weights.items())))
        return 0
    ok, S = has_fractional_pm_oracle(g) if g.n <= 24 else (False, None)
    payload["violating_set"] = list(S) if S is not None else None
    text = "no fractional perfect matching"
    if S is not None:
        text += f"; S={_fmt_set(S)} leaves more isolated vertices than |S|"
    _emit(args, payload, text)
    return 1


def cmd_extremal(args) -> int:
    build = ex.build_extremal_thm12 if args.theorem == "12" else ex.build_extremal_thm14
    check = ex.check_lemma25 if args.theorem == "12" else ex.check_lemma27
    g = build(args.n, args.t)
    cert = check(args.n, args.t, args.k)
    oracle_ok, oracle_cert = has_perfect_k_matching(g, args.k) if g.n <= 24 else (None, None)
    payload = {
        "graph6": to_graph6(g),
        "n": g.n,
        "m": g.num_edges,
        "certificate": cert.to_json(),
        "oracle_has_perfect_k_matching": oracle_ok,
        "fractional_perfect_matching": has_fractional_pm_fast(g),
    }
    text = (
        f"{to_graph6(g)}  n={g.n} m={g.num_edges}\n"
        f"join-block certificate S={_fmt_set(cert.S)} q={cert.q} i={cert.i} slack={cert.slack}\n"
        f"fractional perfect matching: {payload['fractional_perfect_matching']}"
    )
    _emit(args, payload, text)
    return 0


def cmd_threshold(args) -> int:
    fn = ex.threshold_thm12 if args.theorem == "12" else ex.threshold_thm14
    r = fn(args.n, args.t, _tolerance(args), theorem_range=not args.construction_range)
    payload = dict(zip(ex.CSV_HEADER, r.csv_row()))
    payload.update(rho_star=r.rho_star, rho_direct=r.rho_direct, gap=r.agreement_gap)
    _emit(args, payload, f"polynomial: {r.poly}\nrho_star = {r.rho_star!r}\nrho_direct = {r.rho_direct!r}\ngap = {r.agreement_gap:.3e}")
    return 0


def cmd_sweep(args) -> int:
    if args.inequalities:
        results = [
            ex.sweep_g_positive(args.t_max, args.n_max),
            ex.sweep_psi_positive(args.t_max, args.n_max),
            ex.sweep_T_identity(),
            ex.sweep_rho_bound(args.t_max, args.n_max, _tolerance(args)),
        ]
        payload = {r.name: {"points": r.points, "ok": r.ok, "minimum": r.minimum, "failures": r.failures[:20]} for r in results}
        _emit(args, payload, "\n".join(f"{r.name}: {'ok' if r.ok else 'FAIL'} ({r.points} points, min {r.minimum})" for r in results))
        return 0 if all(r.ok for r in results) else 1
    lo = 2 if args.theorem == "12" else 6
    pairs = [(n, t) for t in range(1, args.t_max + 1) for n in range(2 * t + lo, args.n_max + 1, 2)]
    print(ex.threshold_table(pairs, args.theorem, _tolerance(args)), end="")
    return 0


def cmd_verify(args) -> int:
    n = args.n if args.n is not None else (6 if args.theorem == "11i" else None)
    if n is None:
        raise GraphInputError("--n is required")
    sample = None
    corpus = args.corpus
    if corpus == "sample":
        sample = SampleSpec(args.sample_model, args.count, args.p, args.radius)
    workers = args.workers or int(os.environ.get(WORKERS_ENV, "1"))
    cfg = TheoremRunConfig(
        theorem=args.theorem,
        n=n,
        t=args.t,
        k=args.k,
        corpus=corpus,
        graph6_path=args.graph6_file,
        sample=sample,
        tolerance=_tolerance(args),
        seed=args.seed,
        workers=workers,
        connectivity=args.connectivity,
        threshold_offset=args.threshold_offset,
        checkpoint=args.checkpoint,
    )
    report = verify_theorem(cfg)
    if args.report:
        write_report(report, args.report)
    if args.json:
        print(report.payload(with_timing=True))
    else:
        print(f"config: {json.dumps(report.config, sort_keys=True)}")
        print(f"threshold: {report.threshold!r}")
        print(f"graphs: {report.corpus_size}")
        for key, val in report.counts.items():
            print(f"  {key}: {val}")
        print(f"exceptions: {len(report.exceptions)}, counterexamples: {len(report.counterexamples)}, ties: {len(report.ties)}")
        print(f"spot check: {report.spot_check['checked']} rechecked, {report.spot_check['failed']} failed")
    return 1 if report.counterexamples else 0


def cmd_enumerate(args) -> int:
    for g in enumerate_connected(args.n):
        print(to_graph6(g))
    return 0


# -- parser -------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--tol", type=float, default=1e-8, help="comparison tolerance")
    p.add_argument("--eig-tol", type=float, default=1e-12, help="power-iteration tolerance")
    p.add_argument("--max-iter", type=int, default=10**6)


def _add_graph(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--graph6", help="graph in graph6 format")
    g.add_argument("--edges", help="edge-list file ('-' for stdin)")
    g.add_argument("--build", help="expression such as 'K1 v (K5 u 2K1)'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectral-kmatch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("radius", help="adjacency spectral radius")
    _add_graph(p); _add_common(p)
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("quotient", help="quotient matrix of a vertex partition")
    _add_graph(p); _add_common(p)
    p.add_argument("--partition", required=True, help="blocks as '0|1,2|3,4,5'")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("kmatch", help="decide perfect k-matching (odd k)")
    _add_graph(p); _add_common(p)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_kmatch)

    p = sub.add_parser("fpm", help="decide fractional perfect matching")
    _add_graph(p); _add_common(p)
    p.set_defaults(func=cmd_fpm)

    p = sub.add_parser("extremal", help="build an extremal graph and certify it")
    _add_common(p)
    p.add_argument("--theorem", choices=["12", "14"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("threshold", help="spectral threshold by quotient polynomial and power iteration")
    _add_common(p)
    p.add_argument("--theorem", choices=["12", "14"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--construction-range", action="store_true",
                   help="allow n below the theorem range (down to the construction range)")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("sweep", help="threshold CSV table or inequality sweeps")
    _add_common(p)
    p.add_argument("--theorem", choices=["12", "14"], default="12")
    p.add_argument("--t-max", type=int, default=4)
    p.add_argument("--n-max", type=int, default=40)
    p.add_argument("--inequalities", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="verify a theorem over a corpus")
    _add_common(p)
    p.add_argument("--theorem", choices=["11i", "12", "14"], required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--corpus", choices=["internal", "graph6", "sample"], default="internal")
    p.add_argument("--graph6-file")
    p.add_argument("--sample-model", choices=["near-extremal", "uniform"], default="near-extremal")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None, help=f"worker processes (default ${WORKERS_ENV} or 1)")
    p.add_argument("--connectivity", choices=["at-least", "exact"], default="at-least")
    p.add_argument("--threshold-offset", type=float, default=0.0)
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--checkpoint", help="checkpoint file for resumable runs")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="connected graphs of order n in graph6")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphInputError, UnsupportedError, OSError) as err:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.print_usage(sys.stderr)
        print(f"error: {err}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
