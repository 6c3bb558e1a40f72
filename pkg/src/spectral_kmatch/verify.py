"""Machine verification of the spectral perfect k-matching theorems over graph corpora.

Each graph in a corpus is classified by the first applicable rule:

1. connectivity below t             -> skipped-not-t-connected
2. (fractional family only) no fractional perfect matching -> skipped-no-fpm
3. rho < threshold - cmp_tol        -> below-threshold
4. isomorphic to the extremal graph -> extremal-exception
5. |rho - threshold| <= cmp_tol     -> tie (never a counterexample)
6. has a perfect k-matching         -> satisfies-theorem, otherwise COUNTEREXAMPLE
"""

from __future__ import annotations

import enum
import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .enumerate import enumerate_connected
from .extremal import (
    build_extremal_thm12,
    build_extremal_thm14,
    threshold_thm11i,
    threshold_thm12,
    threshold_thm14,
    thm11i_extremal,
)
from .graph import Graph, GraphInputError, UnsupportedError, is_t_connected, vertex_connectivity
from .io import parse_graph6, read_graph6_file, to_graph6
from .iso import are_isomorphic
from .matching import (
    DeficiencyCertificate,
    has_fractional_pm_fast,
    has_fractional_pm_oracle,
    has_perfect_k_matching,
    perfect_matching_witness,
    verify_witness,
)
from .spectral import DEFAULT_TOL, Tolerance, adjacency, spectral_radius

SCHEMA_VERSION = 1
CHECKPOINT_EVERY = 10_000


class ReportSchemaError(ValueError):
    pass


class Theorem(str, enum.Enum):
    """Run families, keyed by their CLI identifiers."""

    T11I = "11i"  # n=6, k>=3 odd, extremal K2 v 4K1
    T12 = "12"  # t-connected, extremal Kt v (K{n-2t-1} u (t+1)K1)
    T14 = "14"  # t-connected with a fractional perfect matching, extremal Kt v (K{n-2t-3} u K3 u tK1)


class Verdict(str, enum.Enum):
    NOT_T_CONNECTED = "skipped-not-t-connected"
    NO_FPM = "skipped-no-fpm"
    BELOW = "below-threshold"
    EXTREMAL = "extremal-exception"
    SATISFIES = "satisfies-theorem"
    TIE = "tie"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"
    UNSUPPORTED = "unsupported"


@dataclass(frozen=True)
class SampleSpec:
    model: str = "near-extremal"  # or "uniform"
    count: int = 1000
    p: float = 0.5
    radius: int = 3


@dataclass(frozen=True)
class TheoremRunConfig:
    theorem: Theorem
    n: int
    t: int
    k: int
    corpus: str = "internal"  # "internal" | "graph6" | "sample"
    graph6_path: str | None = None
    sample: SampleSpec | None = None
    tolerance: Tolerance = DEFAULT_TOL
    seed: int = 0
    workers: int = 1
    connectivity: str = "at-least"  # or "exact"
    threshold_offset: float = 0.0
    checkpoint: str | None = None

    def __post_init__(self):
        th = Theorem(self.theorem)
        object.__setattr__(self, "theorem", th)
        if self.k < 1 or self.k % 2 == 0:
            raise GraphInputError(f"k must be odd and positive, got {self.k}")
        if self.n % 2:
            raise GraphInputError(f"n must be even, got {self.n}")
        if th is Theorem.T11I and (self.n != 6 or self.t != 1 or self.k < 3):
            raise GraphInputError("the n=6 family needs n=6, t=1, odd k >= 3")
        if th is Theorem.T12 and (self.t < 1 or self.n < 5 * self.t + 3):
            raise GraphInputError(f"the t-connected family needs t >= 1 and n >= 5t+3, got n={self.n}, t={self.t}")
        if th is Theorem.T14 and (self.t < 1 or self.n < 5 * self.t + 7):
            raise GraphInputError(f"the fractional family needs t >= 1 and n >= 5t+7, got n={self.n}, t={self.t}")
        if self.corpus not in ("internal", "graph6", "sample"):
            raise GraphInputError(f"unknown corpus kind {self.corpus!r}")
        if self.corpus == "graph6" and not self.graph6_path:
            raise GraphInputError("graph6 corpus needs a path")
        if self.corpus == "sample" and self.sample is None:
            raise GraphInputError("sample corpus needs a SampleSpec")
        if self.connectivity not in ("at-least", "exact"):
            raise GraphInputError("connectivity must be 'at-least' or 'exact'")
        if self.workers < 1:
            raise GraphInputError("workers must be >= 1")

    def echo(self) -> dict:
        d = asdict(self)
        d["theorem"] = self.theorem.value
        return d


@dataclass
class GraphVerdict:
    graph_id: str
    rho: float | None
    verdict: Verdict
    certificate: DeficiencyCertificate | None = None
    isomorphic_to_extremal: bool | None = None
    perfect_k_matching: bool | None = None

    def to_json(self) -> dict:
        return {
            "graph6": self.graph_id,
            "rho": self.rho,
            "verdict": self.verdict.value,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "isomorphic_to_extremal": self.isomorphic_to_extremal,
            "perfect_k_matching": self.perfect_k_matching,
        }

    @classmethod
    def from_json(cls, d: dict) -> "GraphVerdict":
        cert = d.get("certificate")
        return cls(
            d["graph6"],
            d["rho"],
            Verdict(d["verdict"]),
            DeficiencyCertificate.from_json(cert) if cert else None,
            d.get("isomorphic_to_extremal"),
            d.get("perfect_k_matching"),
        )


def extremal_graph(cfg: TheoremRunConfig) -> Graph:
    if cfg.theorem is Theorem.T11I:
        return thm11i_extremal()
    if cfg.theorem is Theorem.T12:
        return build_extremal_thm12(cfg.n, cfg.t)
    return build_extremal_thm14(cfg.n, cfg.t)


def run_threshold(cfg: TheoremRunConfig) -> float:
    """Spectral radius of the extremal graph, shifted by ``threshold_offset``."""
    if cfg.theorem is Theorem.T11I:
        base = threshold_thm11i(cfg.tolerance).rho_star
    elif cfg.theorem is Theorem.T12:
        base = threshold_thm12(cfg.n, cfg.t, cfg.tolerance).rho_star
    else:
        base = threshold_thm14(cfg.n, cfg.t, cfg.tolerance).rho_star
    return base + cfg.threshold_offset


def _connected_enough(g: Graph, cfg: TheoremRunConfig) -> bool:
    if cfg.connectivity == "exact":
        return g.n >= 2 and vertex_connectivity(g) == cfg.t
    return is_t_connected(g, cfg.t)


def _decide(g: Graph, k: int) -> tuple[bool, DeficiencyCertificate | None]:
    # a perfect matching scaled by k settles the positive case constructively
    w = perfect_matching_witness(g, k)
    if w is not None and verify_witness(g, w):
        return True, None
    ok, _ = has_perfect_k_matching(g, k, maximal=False)
    if ok:
        return True, None
    return has_perfect_k_matching(g, k, maximal=True)


def classify_graph(
    g: Graph, cfg: TheoremRunConfig, threshold: float, extremal: Graph | None = None
) -> GraphVerdict:
    if g.n != cfg.n:
        raise GraphInputError(f"graph order {g.n} != configured n={cfg.n}")
    gid = to_graph6(g)
    if not _connected_enough(g, cfg):
        return GraphVerdict(gid, None, Verdict.NOT_T_CONNECTED)
    if cfg.theorem is Theorem.T14 and not has_fractional_pm_fast(g):
        return GraphVerdict(gid, None, Verdict.NO_FPM)
    tol = cfg.tolerance
    rho = spectral_radius(g, tol)
    if rho < threshold - tol.cmp_tol:
        return GraphVerdict(gid, rho, Verdict.BELOW)
    ext = extremal if extremal is not None else extremal_graph(cfg)
    if are_isomorphic(g, ext):
        return GraphVerdict(gid, rho, Verdict.EXTREMAL, isomorphic_to_extremal=True)
    try:
        ok, cert = _decide(g, cfg.k)
    except UnsupportedError:
        return GraphVerdict(gid, rho, Verdict.UNSUPPORTED)
    if abs(rho - threshold) <= tol.cmp_tol:
        return GraphVerdict(gid, rho, Verdict.TIE, cert, False, ok)
    if ok:
        return GraphVerdict(gid, rho, Verdict.SATISFIES, perfect_k_matching=True)
    return GraphVerdict(gid, rho, Verdict.COUNTEREXAMPLE, cert, False, False)


def recheck_verdict(g: Graph, cfg: TheoremRunConfig, threshold: float, v: GraphVerdict) -> bool:
    """Recompute the defining predicate of ``v`` along independent routes.

    Connectivity by exact brute force, fractional perfect matchings by the
    subset scan, rho by a dense symmetric eigensolver and perfect k-matchings
    by the full deficiency scan.
    """
    tol = cfg.tolerance
    if cfg.connectivity == "exact":
        connected = vertex_connectivity(g) == cfg.t
    else:
        connected = g.n >= 2 and vertex_connectivity(g) >= cfg.t
    if v.verdict is Verdict.NOT_T_CONNECTED:
        return not connected
    if not connected:
        return False
    fpm = has_fractional_pm_oracle(g)[0]
    if v.verdict is Verdict.NO_FPM:
        return cfg.theorem is Theorem.T14 and not fpm
    if cfg.theorem is Theorem.T14 and not fpm:
        return False
    rho = float(np.linalg.eigvalsh(adjacency(g).astype(float)).max())
    if v.verdict is Verdict.BELOW:
        return rho < threshold - tol.cmp_tol
    if rho < threshold - tol.cmp_tol:
        return False
    iso = are_isomorphic(g, extremal_graph(cfg))
    if v.verdict is Verdict.EXTREMAL:
        return iso
    if iso:
        return False
    if v.verdict is Verdict.UNSUPPORTED:
        return True
    ok, cert = has_perfect_k_matching(g, cfg.k, maximal=True)
    if v.verdict is Verdict.TIE:
        return abs(rho - threshold) <= tol.cmp_tol
    if v.verdict is Verdict.SATISFIES:
        return ok and rho >= threshold - tol.cmp_tol
    if v.verdict is Verdict.COUNTEREXAMPLE:
        return (not ok) and rho >= threshold + tol.cmp_tol and cert is not None and cert.recheck(g)
    return False


# -- corpora ------------------------------------------------------------------

def sample_random_graphs(
    n: int,
    model: str = "near-extremal",
    count: int = 1,
    seed: int = 0,
    *,
    p: float = 0.5,
    radius: int = 1,
    t: int = 1,
    family: str = "14",
) -> Iterator[Graph]:
    """Deterministic random graphs.

    ``uniform``: each pair independently with probability ``p``.
    ``near-extremal``: the extremal graph of ``family`` with between 1 and
    ``radius`` random pair flips (none when radius is 0); at most one edge
    at the join block is removed per sample.
    """
    if count < 1:
        raise GraphInputError("count must be >= 1")
    rng = random.Random(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if model == "uniform":
        for _ in range(count):
            yield Graph.from_edges(n, [e for e in pairs if rng.random() < p])
        return
    if model != "near-extremal":
        raise GraphInputError(f"unknown sampling model {model!r}")
    base = build_extremal_thm14(n, t) if family == "14" else build_extremal_thm12(n, t)
    for _ in range(count):
        g = base
        if radius > 0:
            flips = rng.randint(1, radius)
            chosen = set()
            join_removed = False
            while len(chosen) < flips:
                u, v = pairs[rng.randrange(len(pairs))]
                if (u, v) in chosen:
                    continue
                at_join = u < t and g.has_edge(u, v)
                if at_join and join_removed:
                    continue
                join_removed |= at_join
                chosen.add((u, v))
                g = g.toggle_edge(u, v)
        yield g


def load_corpus(cfg: TheoremRunConfig) -> list[str]:
    if cfg.corpus == "internal":
        return [to_graph6(g) for g in enumerate_connected(cfg.n)]
    if cfg.corpus == "graph6":
        return [to_graph6(g) for g in read_graph6_file(cfg.graph6_path)]
    s = cfg.sample
    fam = "14" if cfg.theorem is Theorem.T14 else "12"
    return [
        to_graph6(g)
        for g in sample_random_graphs(
            cfg.n, s.model, s.count, cfg.seed, p=s.p, radius=s.radius, t=cfg.t, family=fam
        )
    ]


# -- runs and reports -------------------------------------------------------

@dataclass
class RunReport:
    config: dict
    threshold: float
    counts: dict
    exceptions: list
    counterexamples: list
    ties: list
    unsupported: list = field(default_factory=list)
    corpus_size: int = 0
    spot_check: dict = field(default_factory=dict)
    elapsed_s: float = 0.0
    schema: int = SCHEMA_VERSION

    # execution details that never influence verdicts
    TIMING_FIELDS = ("elapsed_s",)
    EXECUTION_CONFIG_FIELDS = ("workers", "checkpoint")

    def to_json(self) -> dict:
        cfg = self.config
        return {
            "schema": self.schema,
            "theorem": cfg["theorem"],
            "n": cfg["n"],
            "t": cfg["t"],
            "k": cfg["k"],
            "threshold": self.threshold,
            "counts": self.counts,
            "exceptions": self.exceptions,
            "counterexamples": self.counterexamples,
            "ties": self.ties,
            "unsupported": self.unsupported,
            "corpus_size": self.corpus_size,
            "spot_check": self.spot_check,
            "config": cfg,
            "elapsed_s": self.elapsed_s,
        }

    def payload(self, with_timing: bool = False) -> str:
        d = self.to_json()
        if not with_timing:
            for key in self.TIMING_FIELDS:
                d.pop(key, None)
            d["config"] = {k: v for k, v in d["config"].items() if k not in self.EXECUTION_CONFIG_FIELDS}
        return json.dumps(d, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, d: dict) -> "RunReport":
        if d.get("schema") != SCHEMA_VERSION:
            raise ReportSchemaError(f"report schema {d.get('schema')!r}, expected {SCHEMA_VERSION}")
        return cls(
            config=d["config"],
            threshold=d["threshold"],
            counts=d["counts"],
            exceptions=d["exceptions"],
            counterexamples=d["counterexamples"],
            ties=d["ties"],
            unsupported=d.get("unsupported", []),
            corpus_size=d["corpus_size"],
            spot_check=d.get("spot_check", {}),
            elapsed_s=d.get("elapsed_s", 0.0),
        )


def write_report(r: RunReport, path: str | Path) -> None:
    Path(path).write_text(r.payload(with_timing=True) + "\n")


def read_report(path: str | Path) -> RunReport:
    return RunReport.from_json(json.loads(Path(path).read_text()))


def _classify_chunk(args) -> list[dict]:
    cfg, threshold, chunk = args
    ext = extremal_graph(cfg)
    return [classify_graph(parse_graph6(s), cfg, threshold, ext).to_json() for s in chunk]


def _chunks(items: list, size: int) -> Iterable[list]:
    for i in range(0, len(items), size):
        yield items[i:i + size]


def _verdict_config(echo: dict) -> dict:
    return {k: v for k, v in echo.items() if k not in RunReport.EXECUTION_CONFIG_FIELDS}


def _load_checkpoint(cfg: TheoremRunConfig) -> list[dict]:
    if not cfg.checkpoint or not os.path.exists(cfg.checkpoint):
        return []
    data = json.loads(Path(cfg.checkpoint).read_text())
    if _verdict_config(data.get("config") or {}) != _verdict_config(json.loads(json.dumps(cfg.echo()))):
        raise ReportSchemaError("checkpoint belongs to a different run configuration")
    return data["verdicts"]


def _save_checkpoint(cfg: TheoremRunConfig, verdicts: list[dict]) -> None:
    tmp = cfg.checkpoint + ".tmp"
    Path(tmp).write_text(json.dumps({"config": cfg.echo(), "verdicts": verdicts}))
    os.replace(tmp, cfg.checkpoint)


def verify_theorem(cfg: TheoremRunConfig, spot_checks: int = 100) -> RunReport:
    start = time.perf_counter()
    threshold = run_threshold(cfg)
    corpus = load_corpus(cfg)
    verdicts = _load_checkpoint(cfg)
    todo = corpus[len(verdicts):]
    chunk_size = 500
    with_pool = cfg.workers > 1 and len(todo) > chunk_size
    pool = ProcessPoolExecutor(max_workers=cfg.workers) if with_pool else None
    try:
        for block in _chunks(todo, CHECKPOINT_EVERY):
            jobs = [(cfg, threshold, c) for c in _chunks(block, chunk_size)]
            results = pool.map(_classify_chunk, jobs) if pool else map(_classify_chunk, jobs)
            for part in results:
                verdicts.extend(part)
            if cfg.checkpoint:
                _save_checkpoint(cfg, verdicts)
    finally:
        if pool:
            pool.shutdown()

    order = sorted(range(len(verdicts)), key=lambda j: (verdicts[j]["graph6"], j))
    ordered = [verdicts[j] for j in order]
    counts = {v.value: 0 for v in Verdict}
    for v in ordered:
        counts[v["verdict"]] += 1

    def pick(kind: Verdict) -> list[dict]:
        return [v for v in ordered if v["verdict"] == kind.value]

    checked = failed = 0
    failures = []
    if ordered and spot_checks:
        rng = random.Random(cfg.seed)
        idx = sorted(rng.sample(range(len(ordered)), min(spot_checks, len(ordered))))
        for j in idx:
            v = GraphVerdict.from_json(ordered[j])
            checked += 1
            if not recheck_verdict(parse_graph6(v.graph_id), cfg, threshold, v):
                failed += 1
                failures.append(v.graph_id)
    report = RunReport(
        config=json.loads(json.dumps(cfg.echo())),
        threshold=threshold,
        counts=counts,
        exceptions=pick(Verdict.EXTREMAL),
        counterexamples=pick(Verdict.COUNTEREXAMPLE),
        ties=pick(Verdict.TIE),
        unsupported=pick(Verdict.UNSUPPORTED),
        corpus_size=len(corpus),
        spot_check={"checked": checked, "failed": failed, "failures": failures},
        elapsed_s=time.perf_counter() - start,
    )
    if cfg.checkpoint and os.path.exists(cfg.checkpoint):
        os.remove(cfg.checkpoint)
    return report
