"""Adjacency spectral radius, equitable partitions and quotient polynomials."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Sequence

import numpy as np

from .graph import Graph, GraphInputError, component_masks, bits


class NumericalError(ArithmeticError):
    """Raised when an iterative method fails to converge or a root is not bracketed."""

    def __init__(self, message: str, last_value: float | None = None, residual: float | None = None):
        super().__init__(message)
        self.last_value = last_value
        self.residual = residual


class SpectralTie(ArithmeticError):
    """Two spectral quantities agree to within the comparison tolerance."""

    def __init__(self, a: float, b: float, tol: float):
        super().__init__(f"tie: |{a!r} - {b!r}| <= {tol:g}")
        self.a, self.b, self.tol = a, b, tol


@dataclass(frozen=True)
class Tolerance:
    eig_tol: float = 1e-12
    cmp_tol: float = 1e-8
    max_iter: int = 10**6

    def __post_init__(self):
        if not (self.eig_tol > 0 and self.cmp_tol > 0 and self.max_iter >= 1):
            raise ValueError("tolerances must be positive and max_iter >= 1")


DEFAULT_TOL = Tolerance()


class Comparison(enum.Enum):
    LESS = "less"
    TIE = "tie"
    GREATER = "greater"


def compare(a: float, b: float, tol: Tolerance = DEFAULT_TOL) -> Comparison:
    if abs(a - b) <= tol.cmp_tol:
        return Comparison.TIE
    return Comparison.GREATER if a > b else Comparison.LESS


# -- spectral radius ---------------------------------------------------------

def adjacency(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=np.int64)
    for u, v in g.edges():
        a[u, v] = a[v, u] = 1
    return a


def _perron_value(a: np.ndarray, tol: Tolerance) -> float:
    """Largest eigenvalue of a connected component's adjacency matrix.

    Iterates with A + I so that a bipartite component (spectrum symmetric
    about 0) still has a unique dominant eigenvalue. The stopping rule
    extrapolates the remaining error from the geometric decay of successive
    Rayleigh-quotient changes.
    """
    m = a.shape[0]
    if m == 1:
        return 0.0
    shifted = a + np.eye(m)
    x = np.ones(m) / np.sqrt(m)
    rq = float(x @ a @ x)
    prev_delta = None
    for _ in range(tol.max_iter):
        y = shifted @ x
        x = y / np.linalg.norm(y)
        new_rq = float(x @ a @ x)
        delta = abs(new_rq - rq)
        rq = new_rq
        scale = max(1.0, abs(rq))
        if delta <= 8 * m * np.finfo(float).eps * scale:
            return rq
        if prev_delta is not None and prev_delta > 0:
            ratio = min(delta / prev_delta, 0.999999)
            if delta * ratio / (1.0 - ratio) <= tol.eig_tol * scale:
                return rq
        prev_delta = delta
    residual = float(np.linalg.norm(a @ x - rq * x))
    raise NumericalError(
        f"power iteration did not converge in {tol.max_iter} steps", last_value=rq, residual=residual
    )


def spectral_radius(g: Graph, tol: Tolerance = DEFAULT_TOL) -> float:
    """Largest adjacency eigenvalue: the maximum Perron value over components."""
    if g.n < 1:
        raise GraphInputError("spectral radius of the empty graph is undefined")
    if g.num_edges == 0:
        return 0.0
    a = adjacency(g)
    best = 0.0
    for comp in component_masks(g.adj, g.vertex_mask):
        idx = list(bits(comp))
        if len(idx) > 1:
            best = max(best, _perron_value(a[np.ix_(idx, idx)], tol))
    return best


# -- partitions and quotient matrices ---------------------------------------

Partition = Sequence[Sequence[int]]


def _validate_partition(g: Graph, p: Partition) -> list[list[int]]:
    blocks = [list(b) for b in p]
    seen = set()
    for b in blocks:
        if not b:
            raise GraphInputError("partition blocks must be nonempty")
        for v in b:
            if not 0 <= v < g.n:
                raise GraphInputError(f"vertex {v} not in 0..{g.n - 1}")
            if v in seen:
                raise GraphInputError(f"vertex {v} appears in two blocks")
            seen.add(v)
    if len(seen) != g.n:
        raise GraphInputError("partition does not cover every vertex")
    return blocks


def _block_counts(g: Graph, blocks: list[list[int]]) -> list[list[list[int]]]:
    masks = [sum(1 << v for v in b) for b in blocks]
    return [[[(g.adj[v] & mj).bit_count() for v in bi] for mj in masks] for bi in blocks]


def is_equitable(g: Graph, p: Partition) -> bool:
    blocks = _validate_partition(g, p)
    return all(len(set(row)) == 1 for rows in _block_counts(g, blocks) for row in rows)


@dataclass(frozen=True)
class QuotientMatrix:
    entries: tuple[tuple[Fraction | int, ...], ...]
    block_sizes: tuple[int, ...]
    equitable: bool

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries])


def quotient_matrix(g: Graph, p: Partition) -> QuotientMatrix:
    """Average row sums of the adjacency blocks induced by ``p``."""
    blocks = _validate_partition(g, p)
    counts = _block_counts(g, blocks)
    entries = []
    for i, rows in enumerate(counts):
        row = []
        for cell in rows:
            avg = Fraction(sum(cell), len(blocks[i]))
            row.append(int(avg) if avg.denominator == 1 else avg)
        entries.append(tuple(row))
    equitable = all(len(set(cell)) == 1 for rows in counts for cell in rows)
    return QuotientMatrix(tuple(entries), tuple(len(b) for b in blocks), equitable)


# -- polynomials -------------------------------------------------------------

@dataclass(frozen=True)
class Polynomial:
    """Monic polynomial, coefficients from the highest degree down."""

    coefficients: tuple

    def __post_init__(self):
        if not self.coefficients or self.coefficients[0] != 1:
            raise ValueError("polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = 0
        for c in self.coefficients:
            acc = acc * x + c
        return acc

    def derivative_at(self, x):
        acc = 0
        d = self.degree
        for k, c in enumerate(self.coefficients[:-1]):
            acc = acc * x + c * (d - k)
        return acc

    def taylor_shift(self, a) -> tuple:
        """Coefficients of p(x + a), highest degree first."""
        coeffs = list(self.coefficients)
        n = len(coeffs)
        for i in range(n - 1):
            for j in range(1, n - i):
                coeffs[j] += a * coeffs[j - 1]
        return tuple(coeffs)

    def __str__(self) -> str:
        terms = []
        d = self.degree
        for k, c in enumerate(self.coefficients):
            p = d - k
            if c == 0:
                continue
            mag = abs(c)
            if p == 0 or mag != 1:
                body = f"{mag}"
            else:
                body = ""
            if p >= 2:
                body += f"x^{p}"
            elif p == 1:
                body += "x"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _as_exact(x):
    if isinstance(x, (int, Fraction)):
        return x
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, float) and x.is_integer():
        return int(x)
    if isinstance(x, Number):
        return Fraction(x)
    raise TypeError(f"unsupported matrix entry {x!r}")


def char_poly(m: QuotientMatrix | Sequence[Sequence] | np.ndarray) -> Polynomial:
    """det(xI - M) by the Faddeev-LeVerrier trace recursion, in exact arithmetic."""
    rows = m.entries if isinstance(m, QuotientMatrix) else m
    a = [[_as_exact(x) for x in row] for row in rows]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    coeffs = [1]
    # M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k) / k
    mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        for i in range(n):
            mk[i][i] += coeffs[-1]
        am = [[sum(a[i][l] * mk[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        c = Fraction(-sum(am[i][i] for i in range(n)), k)
        coeffs.append(int(c) if c.denominator == 1 else c)
        mk = am
    return Polynomial(tuple(coeffs))


def largest_real_root(p: Polynomial, lower_hint: float | None = None, tol: Tolerance = DEFAULT_TOL) -> float:
    """Largest real root, bracketed on [lower_hint, Cauchy bound] and Newton-polished.

    The result is certified largest by Descartes' rule: the polynomial shifted
    just past the root must have no sign changes among its coefficients.
    """
    coeffs = [float(c) for c in p.coefficients]
    upper = 1.0 + max((abs(c) for c in coeffs[1:]), default=0.0)
    lo = -upper if lower_hint is None else float(lower_hint)
    f = lambda x: float(p(x))
    if p.degree == 0:
        raise NumericalError("constant polynomial has no roots")
    hi = upper
    found = None
    while True:
        # rightmost sign change on a grid, then bisection
        grid = np.linspace(lo, hi, 2049)
        vals = [f(x) for x in grid]
        bracket = None
        for j in range(len(grid) - 1, 0, -1):
            if vals[j] == 0.0:
                bracket = (grid[j], grid[j])
                break
            if vals[j - 1] <= 0.0 < vals[j] or vals[j - 1] >= 0.0 > vals[j]:
                bracket = (grid[j - 1], grid[j])
                break
        if bracket is None:
            if found is not None:
                # remaining roots above are complex; Descartes was inconclusive
                return found
            raise NumericalError(f"no sign change on [{lo}, {hi}]", last_value=vals[-1])
        a, b = bracket
        fa = f(a)
        if fa == 0.0:
            b = a
        while b - a > tol.cmp_tol * 1e-3 * max(1.0, abs(b)):
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break  # bracket is down to adjacent floats
            fm = f(mid)
            if fm == 0.0:
                a = b = mid
                break
            if (fm < 0) == (fa < 0):
                a, fa = mid, fm
            else:
                b = mid
        root = float(0.5 * (a + b))
        for _ in range(3):
            d = float(p.derivative_at(root))
            if d == 0.0:
                break
            step = f(root) / d
            if abs(step) > b - a + 1e-12:
                break
            root -= step
        eps = 1e-9 * max(1.0, abs(root))
        shifted = p.taylor_shift(Fraction(root + eps) if _exact(p) else root + eps)
        if all(float(c) >= 0 for c in shifted):
            return root
        found = root
        lo = root + eps
        if lo >= hi:
            raise NumericalError("could not certify the largest root", last_value=root)


def _exact(p: Polynomial) -> bool:
    return all(isinstance(c, (int, Fraction)) for c in p.coefficients)


# -- the explicit polynomials from the proofs --------------------------------

def _check_params(n: int, t: int, min_n: int):
    if t < 1:
        raise GraphInputError(f"t must be >= 1, got {t}")
    if n % 2:
        raise GraphInputError(f"n must be even, got {n}")
    if n < min_n:
        raise GraphInputError(f"n={n} below the construction range n >= {min_n}")


def f_Bstar_thm12(n: int, t: int) -> Polynomial:
    """Characteristic cubic of the 3-block quotient of K_t v (K_{n-2t-1} u (t+1)K_1)."""
    _check_params(n, t, 2 * t + 2)
    return Polynomial((1, t + 3 - n, 2 - n - t * t, -2 * t**3 + (n - 4) * t * t + (n - 2) * t))


def phi_Bstar_thm14(n: int, t: int) -> Polynomial:
    """Characteristic quartic of the 4-block quotient of K_t v (K_{n-2t-3} u K_3 u tK_1)."""
    _check_params(n, t, 2 * t + 6)
    return Polynomial((
        1,
        t + 3 - n,
        n - t * t - 4 * t - 6,
        t * t * n + 3 * t * n + 2 * n - 2 * t**3 - 8 * t * t - 14 * t - 8,
        -2 * t * t * n + 4 * t**3 + 8 * t * t,
    ))


def g_eval(x, n, s, t):
    return x * x - (s + t) * x - 2 * s * s + (n - 2 * t - 4) * s - 2 * t * t + (n - 4) * t + n - 2


def psi_eval(x, n, s, t):
    return (
        x**3
        - (s + t + 4) * x * x
        + (s * n + t * n + 3 * n - 2 * s * s - (2 * t + 8) * s - 2 * t * t - 8 * t - 14) * x
        + 4 * s * s
        + (4 * t + 8 - 2 * n) * s
        - 2 * t * n
        + 4 * t * t
        + 8 * t
    )


def T_eval(n, t):
    return n**3 - (6 * t + 14) * n * n + (5 * t * t + 52 * t + 60) * n - 14 * t * t - 120 * t - 72
