"""Extremal graph families, their spectral thresholds and the supporting inequalities.

Vertex layout of the builders: join block first, then the large clique,
then K_3 (second family only), then the isolated block.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, GraphInputError, complete, copies, disjoint_union, empty, join
from .matching import DeficiencyCertificate, certificate_at
from .spectral import (
    DEFAULT_TOL,
    Comparison,
    Polynomial,
    SpectralTie,
    Tolerance,
    T_eval,
    char_poly,
    compare,
    f_Bstar_thm12,
    g_eval,
    largest_real_root,
    phi_Bstar_thm14,
    psi_eval,
    quotient_matrix,
    spectral_radius,
)


class ConsistencyError(RuntimeError):
    """The quotient-polynomial and full-graph routes disagree."""


def _check(n: int, t: int, min_n: int, k: int | None = None) -> None:
    if t < 1:
        raise GraphInputError(f"t must be >= 1, got {t}")
    if n % 2:
        raise GraphInputError(f"n must be even, got {n}")
    if n < min_n:
        raise GraphInputError(f"n={n} is below n >= {min_n}")
    if k is not None and (k < 1 or k % 2 == 0):
        raise GraphInputError(f"k must be odd and positive, got {k}")


def clique_join(s: int, parts: Iterable[int]) -> Graph:
    """K_s v (K_{p1} u K_{p2} u ...)."""
    return join(complete(s), disjoint_union(*(complete(p) for p in parts)))


def build_extremal_thm12(n: int, t: int) -> Graph:
    """K_t v (K_{n-2t-1} u (t+1)K_1)."""
    _check(n, t, 2 * t + 2)
    return join(complete(t), disjoint_union(complete(n - 2 * t - 1), empty(t + 1)))


def build_extremal_thm14(n: int, t: int) -> Graph:
    """K_t v (K_{n-2t-3} u K_3 u tK_1)."""
    _check(n, t, 2 * t + 6)
    return join(complete(t), disjoint_union(complete(n - 2 * t - 3), complete(3), empty(t)))


def thm11i_extremal() -> Graph:
    """K_2 v 4K_1, the exceptional graph at order 6."""
    return join(complete(2), copies(4, complete(1)))


def join_block(t: int) -> tuple[int, ...]:
    return tuple(range(t))


def partition_thm12(n: int, t: int) -> list[list[int]]:
    """Blocks (K_t, (t+1)K_1, K_{n-2t-1}), the row order of the printed cubic's matrix."""
    big = list(range(t, n - t - 1))
    iso = list(range(n - t - 1, n))
    return [list(range(t)), iso, big]


def partition_thm14(n: int, t: int) -> list[list[int]]:
    """Blocks (K_t, K_3, tK_1, K_{n-2t-3})."""
    big_end = n - t - 3
    return [list(range(t)), list(range(big_end, big_end + 3)), list(range(n - t, n)), list(range(t, big_end))]


def quotient_thm12(n: int, t: int) -> list[list[int]]:
    return [[t - 1, t + 1, n - 2 * t - 1], [t, 0, 0], [t, 0, n - 2 * t - 2]]


def quotient_thm14(n: int, t: int) -> list[list[int]]:
    return [
        [t - 1, 3, t, n - 2 * t - 3],
        [t, 2, 0, 0],
        [t, 0, 0, 0],
        [t, 0, 0, n - 2 * t - 4],
    ]


# -- thresholds --------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdResult:
    n: int
    t: int
    rho_star: float
    poly: Polynomial
    rho_direct: float

    @property
    def agreement_gap(self) -> float:
        return abs(self.rho_star - self.rho_direct)

    def csv_row(self) -> list:
        return [self.n, self.t, repr(self.rho_star), str(self.poly), repr(self.rho_direct), repr(self.agreement_gap)]


CSV_HEADER = ["n", "t", "rho_star", "poly", "rho_direct", "gap"]


def _threshold(n, t, poly, graph, hint, tol) -> ThresholdResult:
    rho_star = largest_real_root(poly, hint, tol)
    rho_direct = spectral_radius(graph, tol)
    if abs(rho_star - rho_direct) > tol.cmp_tol:
        raise ConsistencyError(
            f"(n={n}, t={t}): polynomial root {rho_star!r} vs spectral radius {rho_direct!r}"
        )
    return ThresholdResult(n, t, rho_star, poly, rho_direct)


def threshold_thm12(n: int, t: int, tol: Tolerance = DEFAULT_TOL, theorem_range: bool = True) -> ThresholdResult:
    """rho(K_t v (K_{n-2t-1} u (t+1)K_1)) by the cubic and by power iteration.

    With ``theorem_range`` the call is refused below n >= 5t+3; otherwise the
    builder's wider range n >= 2t+2 is accepted.
    """
    _check(n, t, 5 * t + 3 if theorem_range else 2 * t + 2)
    return _threshold(n, t, f_Bstar_thm12(n, t), build_extremal_thm12(n, t), n - t - 3, tol)


def threshold_thm14(n: int, t: int, tol: Tolerance = DEFAULT_TOL, theorem_range: bool = True) -> ThresholdResult:
    _check(n, t, 5 * t + 7 if theorem_range else 2 * t + 6)
    return _threshold(n, t, phi_Bstar_thm14(n, t), build_extremal_thm14(n, t), n - t - 5, tol)


def threshold_thm11i(tol: Tolerance = DEFAULT_TOL) -> ThresholdResult:
    # blocks (K_2, 4K_1): quotient [[1, 4], [2, 0]]
    g = thm11i_extremal()
    poly = char_poly(quotient_matrix(g, [[0, 1], [2, 3, 4, 5]]))
    return _threshold(6, 2, poly, g, 0.0, tol)


def threshold_table(pairs: Iterable[tuple[int, int]], theorem: str = "12", tol: Tolerance = DEFAULT_TOL) -> str:
    fn = threshold_thm12 if theorem == "12" else threshold_thm14
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for n, t in pairs:
        w.writerow(fn(n, t, tol, theorem_range=False).csv_row())
    return buf.getvalue()


# -- the two extremal failures -----------------------------------------------

def check_lemma25(n: int, t: int, k: int) -> DeficiencyCertificate:
    """Certificate at the join block; slack 2k when n = 2t+2, else k+1."""
    _check(n, t, 2 * t + 2, k)
    cert = certificate_at(build_extremal_thm12(n, t), join_block(t), k)
    expected = 2 * k if n == 2 * t + 2 else k + 1
    if cert.slack != expected:
        raise ConsistencyError(f"slack {cert.slack} != {expected} at (n={n}, t={t}, k={k})")
    return cert


def check_lemma27(n: int, t: int, k: int) -> DeficiencyCertificate:
    """Certificate at the join block; slack is always 2."""
    _check(n, t, 2 * t + 6, k)
    cert = certificate_at(build_extremal_thm14(n, t), join_block(t), k)
    if cert.slack != 2:
        raise ConsistencyError(f"slack {cert.slack} != 2 at (n={n}, t={t}, k={k})")
    return cert


# -- clique-join majorization ------------------------------------------------

def _majorizes(s: int, parts: Sequence[int], target: Sequence[int], tol: Tolerance) -> bool:
    rho = spectral_radius(clique_join(s, parts), tol)
    rho_max = spectral_radius(clique_join(s, target), tol)
    c = compare(rho, rho_max, tol)
    if sorted(parts, reverse=True) == sorted(target, reverse=True):
        return c is Comparison.TIE
    return c is Comparison.LESS


def check_majorization_24(s: int, p: int, parts: Sequence[int], tol: Tolerance = DEFAULT_TOL) -> bool:
    """rho(K_s v (u K_{n_i})) <= rho(K_s v (K_{n-s-p(t-1)} u (t-1)K_p)), strict off the extremal tuple."""
    parts = list(parts)
    if s < 1 or p < 1 or not parts or any(x < p for x in parts) or parts != sorted(parts, reverse=True):
        raise GraphInputError("parts must be sorted descending, all >= p >= 1, with s >= 1")
    t = len(parts)
    target = [sum(parts) - p * (t - 1)] + [p] * (t - 1)
    return _majorizes(s, parts, target, tol)


def check_majorization_26(s: int, parts: Sequence[int], tol: Tolerance = DEFAULT_TOL) -> bool:
    """rho(K_s v (u K_{n_i})) <= rho(K_s v (K_{n-s-t-1} u K_3 u (t-2)K_1)) when n_2 >= 3."""
    parts = list(parts)
    if s < 1 or len(parts) < 2 or parts[1] < 3 or parts[-1] < 1 or parts != sorted(parts, reverse=True):
        raise GraphInputError("parts must be sorted descending with at least two parts, parts[1] >= 3")
    t = len(parts)
    target = [sum(parts) - t - 1, 3] + [1] * (t - 2)
    return _majorizes(s, parts, target, tol)


def random_composition(total: int, parts: int, minimum: int, rng: random.Random) -> list[int]:
    """Uniform-ish composition of ``total`` into ``parts`` values >= minimum, sorted descending."""
    spare = total - parts * minimum
    if spare < 0:
        raise GraphInputError("composition infeasible")
    cuts = sorted(rng.randint(0, spare) for _ in range(parts - 1))
    sizes = [b - a for a, b in zip([0] + cuts, cuts + [spare])]
    return sorted((minimum + x for x in sizes), reverse=True)


# -- the comparison made in the introduction --------------------------------

def compare_section1_claim(n: int, t: int, tol: Tolerance = DEFAULT_TOL) -> bool:
    """rho(K_1 v (K_{n-3} u 2K_1)) > rho(K_t v (K_{n-2t-1} u (t+1)K_1)); raises SpectralTie inside the band."""
    if t < 2 or n < max(8, 2 * t + 2) or n % 2:
        raise GraphInputError("needs t >= 2, even n >= max(8, 2t+2)")
    a = spectral_radius(build_extremal_thm12(n, 1), tol)
    b = spectral_radius(build_extremal_thm12(n, t), tol)
    c = compare(a, b, tol)
    if c is Comparison.TIE:
        raise SpectralTie(a, b, tol.cmp_tol)
    return c is Comparison.GREATER


# -- inequality sweeps -------------------------------------------------------

@dataclass
class SweepResult:
    name: str
    points: int = 0
    failures: list = None
    minimum: float = float("inf")

    def __post_init__(self):
        if self.failures is None:
            self.failures = []

    @property
    def ok(self) -> bool:
        return self.points > 0 and not self.failures


def _x_grid(start: float, step: float, span: float) -> np.ndarray:
    return start + step * np.arange(int(round(span / step)) + 1)


def sweep_g_positive(t_max: int = 4, n_max: int = 40, step: float = 0.25, span: float = 20.0) -> SweepResult:
    """g(x) > 0 for x >= n-t-2, t+1 <= s <= (n-2)/2, even n >= 5t+3."""
    res = SweepResult("g>0")
    for t in range(1, t_max + 1):
        n0 = 5 * t + 3 + (5 * t + 3) % 2
        for n in range(n0, n_max + 1, 2):
            for s in range(t + 1, (n - 2) // 2 + 1):
                for x in _x_grid(n - t - 2, step, span):
                    v = g_eval(float(x), n, s, t)
                    res.points += 1
                    res.minimum = min(res.minimum, v)
                    if not v > 0:
                        res.failures.append((float(x), n, s, t, v))
    return res


def sweep_psi_positive(t_max: int = 4, n_max: int = 40, step: float = 0.25, span: float = 20.0) -> SweepResult:
    """psi(x) > 0 for x >= n-t-4, t+1 <= s <= (n-6)/2, even n >= 5t+7."""
    res = SweepResult("psi>0")
    for t in range(1, t_max + 1):
        n0 = 5 * t + 7 + (5 * t + 7) % 2
        for n in range(n0, n_max + 1, 2):
            for s in range(t + 1, (n - 6) // 2 + 1):
                for x in _x_grid(n - t - 4, step, span):
                    v = psi_eval(float(x), n, s, t)
                    res.points += 1
                    res.minimum = min(res.minimum, v)
                    if not v > 0:
                        res.failures.append((float(x), n, s, t, v))
    return res


def sweep_T_identity(t_max: int = 50) -> SweepResult:
    """T(5t+7) == 36t^2 + 5t + 5 in exact integers."""
    res = SweepResult("T(5t+7)")
    for t in range(1, t_max + 1):
        v = T_eval(5 * t + 7, t)
        res.points += 1
        res.minimum = min(res.minimum, v)
        if v != 36 * t * t + 5 * t + 5:
            res.failures.append((t, v))
    return res


def sweep_rho_bound(t_max: int = 4, n_max: int = 40, tol: Tolerance = DEFAULT_TOL) -> SweepResult:
    """rho(K_t v (K_{n-2t-1} u (t+1)K_1)) > n-t-2 beyond the comparison tolerance."""
    res = SweepResult("rho>n-t-2")
    for t in range(1, t_max + 1):
        n0 = 5 * t + 3 + (5 * t + 3) % 2
        for n in range(n0, n_max + 1, 2):
            gap = spectral_radius(build_extremal_thm12(n, t), tol) - (n - t - 2)
            res.points += 1
            res.minimum = min(res.minimum, gap)
            if not gap > tol.cmp_tol:
                res.failures.append((n, t, gap))
    return res
