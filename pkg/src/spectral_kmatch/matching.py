"""Perfect k-matchings and fractional perfect matchings.

Two independent routes for each question:

* perfect k-matching (odd k): the deficiency scan over all vertex subsets,
  ``odd(G-S) + k*i(G-S) <= k|S|``, versus a constructive search for an integer
  edge weighting (``find_k_matching_witness``);
* fractional perfect matching: the scan ``i(G-S) <= |S|`` versus a perfect
  matching of the bipartite double cover.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .graph import Graph, GraphInputError, UnsupportedError, bits, component_masks, mask_of

MAX_ORACLE_ORDER = 24
MAX_WITNESS_ORDER = 12
MAX_WITNESS_K = 5


class MatchingContractError(ValueError):
    """Raised when a constructive routine is called on an input it cannot serve."""


def _require_odd_k(k: int) -> None:
    if k < 1 or k % 2 == 0:
        raise GraphInputError(f"the deficiency criterion needs odd k >= 1, got k={k}")


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


# -- deficiency and certificates --------------------------------------------

def _q_i(adj, alive: int) -> tuple[int, int]:
    q = i = 0
    for comp in component_masks(adj, alive):
        c = comp.bit_count()
        if c == 1:
            i += 1
        elif c & 1:
            q += 1
    return q, i


@dataclass(frozen=True)
class DeficiencyCertificate:
    S: tuple[int, ...]
    s: int
    i: int
    q: int
    k: int
    slack: int

    def to_json(self) -> dict:
        return {"S": list(self.S), "s": self.s, "i": self.i, "q": self.q, "k": self.k, "slack": self.slack}

    @classmethod
    def from_json(cls, d: dict) -> "DeficiencyCertificate":
        return cls(tuple(d["S"]), d["s"], d["i"], d["q"], d["k"], d["slack"])

    def recheck(self, g: Graph) -> bool:
        """Recompute (i, q, slack) from scratch and compare."""
        alive = g.vertex_mask & ~mask_of(self.S)
        q, i = _q_i(g.adj, alive)
        slack = q + self.k * i - self.k * len(self.S)
        return (q, i, slack, len(self.S)) == (self.q, self.i, self.slack, self.s) and slack >= 1


def certificate_at(g: Graph, s, k: int) -> DeficiencyCertificate:
    _require_odd_k(k)
    S = tuple(sorted(set(s)))
    for v in S:
        if not 0 <= v < g.n:
            raise GraphInputError(f"vertex {v} not in 0..{g.n - 1}")
    q, i = _q_i(g.adj, g.vertex_mask & ~mask_of(S))
    return DeficiencyCertificate(S, len(S), i, q, k, q + k * i - k * len(S))


def deficiency(g: Graph, s, k: int) -> int:
    """q + k*i - k*|S| for G - S; positive means the criterion fails at S."""
    return certificate_at(g, s, k).slack


def has_perfect_k_matching(
    g: Graph, k: int, maximal: bool = True
) -> tuple[bool, DeficiencyCertificate | None]:
    """Decide existence of a perfect k-matching (odd k) by the deficiency scan.

    Subsets are visited by increasing size, then lexicographically. With
    ``maximal`` the whole lattice is scanned and the first subset of largest
    slack is returned; otherwise the first violating subset is.
    """
    _require_odd_k(k)
    if g.n > MAX_ORACLE_ORDER:
        raise UnsupportedError(f"deficiency scan supports n <= {MAX_ORACLE_ORDER}, got {g.n}")
    full = g.vertex_mask
    adj = g.adj
    best = None
    best_slack = 0
    for size in range(g.n + 1):
        for S in combinations(range(g.n), size):
            m = 0
            for v in S:
                m |= 1 << v
            q, i = _q_i(adj, full & ~m)
            slack = q + k * i - k * size
            if slack > best_slack:
                best_slack = slack
                best = DeficiencyCertificate(S, size, i, q, k, slack)
                if not maximal:
                    return False, best
    return best is None, best


# -- constructive k-matching search -----------------------------------------

@dataclass(frozen=True)
class KMatchingWitness:
    k: int
    weights: dict = field(hash=False)

    def to_json(self) -> dict:
        return {"k": self.k, "weights": [[u, v, w] for (u, v), w in sorted(self.weights.items())]}

    @classmethod
    def from_json(cls, d: dict) -> "KMatchingWitness":
        return cls(d["k"], {_edge_key(u, v): w for u, v, w in d["weights"]})


def verify_witness(g: Graph, w: KMatchingWitness) -> bool:
    sums = [0] * g.n
    for (u, v), x in w.weights.items():
        if not (0 <= u < g.n and 0 <= v < g.n) or not g.has_edge(u, v):
            raise GraphInputError(f"weight on non-edge ({u}, {v})")
        if not 0 <= x <= w.k or int(x) != x:
            return False
        sums[u] += x
        sums[v] += x
    return all(s == w.k for s in sums)


def find_k_matching_witness(g: Graph, k: int) -> KMatchingWitness | None:
    """Backtracking search for a perfect k-matching, independent of the deficiency criterion.

    Vertices are settled in index order: when vertex v is reached, every edge
    to an earlier vertex is fixed, so its residual demand must be split over
    edges to later vertices.
    """
    if k < 1:
        raise GraphInputError("k must be positive")
    if g.n > MAX_WITNESS_ORDER or k > MAX_WITNESS_K:
        raise UnsupportedError(
            f"witness search supports n <= {MAX_WITNESS_ORDER}, k <= {MAX_WITNESS_K}"
        )
    n = g.n
    if (n * k) % 2:
        return None
    later = [[u for u in bits(g.adj[v]) if u > v] for v in range(n)]
    nbrs = [bits(g.adj[v]) for v in range(n)]
    residual = [k] * n
    weights: dict[tuple[int, int], int] = {}

    def feasible(after: int) -> bool:
        # every unsettled vertex must still be able to reach its demand
        for u in range(after + 1, n):
            r = residual[u]
            if r == 0:
                continue
            cap = 0
            for w in nbrs[u]:
                if w > after:
                    cap += min(k, residual[w])
                    if cap >= r:
                        break
            if cap < r:
                return False
        return True

    def settle(v: int) -> bool:
        if v == n:
            return True
        if residual[v] == 0:
            return settle(v + 1)
        targets = [u for u in later[v] if residual[u] > 0]
        return split(v, targets, 0, residual[v])

    def split(v: int, targets: list[int], j: int, need: int) -> bool:
        if need == 0:
            old = residual[v]
            residual[v] = 0
            if feasible(v) and settle(v + 1):
                return True
            residual[v] = old
            return False
        if j == len(targets):
            return False
        if sum(min(k, residual[u]) for u in targets[j:]) < need:
            return False
        u = targets[j]
        for x in range(min(k, residual[u], need), -1, -1):
            residual[u] -= x
            if x:
                weights[(v, u)] = x
            if split(v, targets, j + 1, need - x):
                return True
            residual[u] += x
            weights.pop((v, u), None)
        return False

    if settle(0):
        return KMatchingWitness(k, dict(weights))
    return None


# -- maximum matching in general graphs (Edmonds) ---------------------------

def maximum_matching(g: Graph) -> list[int]:
    """Edmonds' blossom algorithm; returns mate[v] or -1."""
    n = g.n
    nbrs = [bits(a) for a in g.adj]
    match = [-1] * n
    for v in range(n):
        if match[v] == -1:
            for u in nbrs[v]:
                if match[u] == -1:
                    match[u], match[v] = v, u
                    break

    def find_path(root: int) -> int:
        used = [False] * n
        parent = [-1] * n
        base = list(range(n))
        used[root] = True
        queue = deque([root])

        def lca(a: int, b: int) -> int:
            seen = [False] * n
            while True:
                a = base[a]
                seen[a] = True
                if match[a] == -1:
                    break
                a = parent[match[a]]
            while True:
                b = base[b]
                if seen[b]:
                    return b
                b = parent[match[b]]

        def mark(v: int, b: int, child: int, blossom: list[bool]) -> None:
            while base[v] != b:
                blossom[base[v]] = blossom[base[match[v]]] = True
                parent[v] = child
                child = match[v]
                v = parent[match[v]]

        while queue:
            v = queue.popleft()
            for to in nbrs[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    b = lca(v, to)
                    blossom = [False] * n
                    mark(v, b, to, blossom)
                    mark(to, b, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = b
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return _augment(to, parent)
                    used[match[to]] = True
                    queue.append(match[to])
        return -1

    def _augment(v: int, parent: list[int]) -> int:
        while v != -1:
            pv = parent[v]
            ppv = match[pv]
            match[v] = pv
            match[pv] = v
            v = ppv
        return 0

    for v in range(n):
        if match[v] == -1:
            find_path(v)
    return match


def perfect_matching_witness(g: Graph, k: int = 1) -> KMatchingWitness | None:
    """k times a perfect matching, if the graph has one (sufficient for every k)."""
    mate = maximum_matching(g)
    if any(m == -1 for m in mate):
        return None
    return KMatchingWitness(k, {(v, m): k for v, m in enumerate(mate) if v < m})


# -- fractional perfect matchings -------------------------------------------

def has_fractional_pm_oracle(g: Graph) -> tuple[bool, tuple[int, ...] | None]:
    """Scan every S for i(G-S) <= |S|; on failure return the first S of largest excess."""
    if g.n > MAX_ORACLE_ORDER:
        raise UnsupportedError(f"subset scan supports n <= {MAX_ORACLE_ORDER}, got {g.n}")
    adj = g.adj
    best = None
    best_excess = 0
    for size in range(g.n + 1):
        for S in combinations(range(g.n), size):
            m = 0
            for v in S:
                m |= 1 << v
            iso = 0
            for v in range(g.n):
                if not m >> v & 1 and adj[v] & ~m == 0:
                    iso += 1
            if iso - size > best_excess:
                best_excess = iso - size
                best = S
    return best is None, best


def _double_cover_matching(g: Graph) -> list[int]:
    """Maximum matching of the bipartite double cover by augmenting paths.

    Left copy u' is adjacent to right copy v'' whenever uv is an edge.
    Returns right[v] = u for matched pairs u' v'', else -1.
    """
    n = g.n
    nbrs = [bits(a) for a in g.adj]
    right = [-1] * n

    def augment(u: int, seen: list[bool]) -> bool:
        for v in nbrs[u]:
            if not seen[v]:
                seen[v] = True
                if right[v] == -1 or augment(right[v], seen):
                    right[v] = u
                    return True
        return False

    for u in range(n):
        augment(u, [False] * n)
    return right


def has_fractional_pm_fast(g: Graph) -> bool:
    return all(u != -1 for u in _double_cover_matching(g))


@dataclass(frozen=True)
class FractionalWitness:
    weights: dict = field(hash=False)

    def to_json(self) -> dict:
        return {"weights": [[u, v, str(w)] for (u, v), w in sorted(self.weights.items())]}


def verify_fractional_witness(g: Graph, w: FractionalWitness) -> bool:
    sums = [Fraction(0)] * g.n
    for (u, v), x in w.weights.items():
        if not g.has_edge(u, v):
            raise GraphInputError(f"weight on non-edge ({u}, {v})")
        if not 0 <= x <= 1:
            return False
        sums[u] += x
        sums[v] += x
    return all(s == 1 for s in sums)


def find_fractional_pm_witness(g: Graph) -> FractionalWitness:
    """Half-integral fractional perfect matching read off the double cover.

    The cover's perfect matching is a permutation of V(G) along edges; its
    2-cycles become weight-1 edges, even cycles are split into alternate
    weight-1 edges, and odd cycles carry 1/2 on every edge.
    """
    right = _double_cover_matching(g)
    if any(u == -1 for u in right):
        raise MatchingContractError("graph has no fractional perfect matching")
    succ = [-1] * g.n
    for v, u in enumerate(right):
        succ[u] = v
    weights: dict[tuple[int, int], Fraction] = {}
    done = [False] * g.n
    for start in range(g.n):
        if done[start]:
            continue
        cyc = [start]
        done[start] = True
        v = succ[start]
        while v != start:
            cyc.append(v)
            done[v] = True
            v = succ[v]
        L = len(cyc)
        if L == 2:
            weights[_edge_key(cyc[0], cyc[1])] = Fraction(1)
        elif L % 2 == 0:
            for j in range(0, L, 2):
                weights[_edge_key(cyc[j], cyc[j + 1])] = Fraction(1)
        else:
            for j in range(L):
                weights[_edge_key(cyc[j], cyc[(j + 1) % L])] = Fraction(1, 2)
    return FractionalWitness(weights)
