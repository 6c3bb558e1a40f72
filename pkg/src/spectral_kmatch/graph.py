"""Immutable simple graphs and the join/union algebra used to name extremal graphs.

Adjacency is stored as one integer bitmask per vertex, which keeps the
exhaustive subset scans elsewhere in the package cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator


class GraphInputError(ValueError):
    """Raised for malformed graphs or out-of-range vertex sets."""


class UnsupportedError(ValueError):
    """Raised when an operation is asked to exceed its supported size."""


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0 or len(self.adj) != self.n:
            raise GraphInputError(f"adjacency length {len(self.adj)} != n={self.n}")
        full = (1 << self.n) - 1
        for v, nb in enumerate(self.adj):
            if nb & ~full:
                raise GraphInputError(f"vertex {v} has neighbours outside 0..{self.n - 1}")
            if nb >> v & 1:
                raise GraphInputError(f"self-loop at vertex {v}")
            rest = nb
            while rest:
                low = rest & -rest
                u = low.bit_length() - 1
                if not self.adj[u] >> v & 1:
                    raise GraphInputError(f"asymmetric adjacency between {v} and {u}")
                rest ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphInputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphInputError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [nb.bit_count() for nb in self.adj]

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in bits(self.adj[u] >> (u + 1) << (u + 1)):
                yield u, v

    @property
    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def add_edge(self, u: int, v: int) -> "Graph":
        return self.toggle_edge(u, v) if not self.has_edge(u, v) else self

    def remove_edge(self, u: int, v: int) -> "Graph":
        return self.toggle_edge(u, v) if self.has_edge(u, v) else self

    def toggle_edge(self, u: int, v: int) -> "Graph":
        if u == v:
            raise GraphInputError("cannot toggle a self-loop")
        adj = list(self.adj)
        adj[u] ^= 1 << v
        adj[v] ^= 1 << u
        return Graph(self.n, tuple(adj))

    def relabel(self, perm: list[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


def _bits_slow(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


_SMALL = 1 << 16
_BITS_TABLE = [_bits_slow(m) for m in range(_SMALL)]


def bits(mask: int) -> tuple[int, ...]:
    """Indices of the set bits of ``mask``, ascending."""
    if mask < _SMALL:
        return _BITS_TABLE[mask]
    return _bits_slow(mask)


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


# -- the graph algebra -------------------------------------------------------

def complete(m: int) -> Graph:
    if m < 0:
        raise GraphInputError("complete graph order must be non-negative")
    full = (1 << m) - 1
    return Graph(m, tuple(full ^ (1 << v) for v in range(m)))


def empty(m: int) -> Graph:
    """``m`` isolated vertices, i.e. mK_1."""
    return Graph(m, (0,) * m)


def disjoint_union(*graphs: Graph) -> Graph:
    adj: list[int] = []
    offset = 0
    for g in graphs:
        adj.extend(nb << offset for nb in g.adj)
        offset += g.n
    return Graph(offset, tuple(adj))


def copies(m: int, g: Graph) -> Graph:
    if m < 0:
        raise GraphInputError("copy count must be non-negative")
    return disjoint_union(*([g] * m))


def join(g1: Graph, g2: Graph) -> Graph:
    n1, n2 = g1.n, g2.n
    left = (1 << n1) - 1
    right = ((1 << n2) - 1) << n1
    adj = [nb | right for nb in g1.adj] + [(nb << n1) | left for nb in g2.adj]
    return Graph(n1 + n2, tuple(adj))


def cycle(m: int) -> Graph:
    if m < 3:
        raise GraphInputError("a cycle needs at least 3 vertices")
    return Graph.from_edges(m, ((v, (v + 1) % m) for v in range(m)))


def path(m: int) -> Graph:
    return Graph.from_edges(m, ((v, v + 1) for v in range(m - 1)))


def star(leaves: int) -> Graph:
    return join(complete(1), empty(leaves))


# -- deletion, components, connectivity -------------------------------------

def _check_subset(g: Graph, s: Iterable[int]) -> int:
    m = 0
    for v in s:
        if not 0 <= v < g.n:
            raise GraphInputError(f"vertex {v} not in 0..{g.n - 1}")
        m |= 1 << v
    return m


def delete_vertices(g: Graph, s: Iterable[int]) -> Graph:
    """Induced subgraph on the surviving vertices, relabelled in their original order."""
    removed = _check_subset(g, s)
    keep = [v for v in range(g.n) if not removed >> v & 1]
    new_index = {v: i for i, v in enumerate(keep)}
    adj = []
    for v in keep:
        adj.append(mask_of(new_index[u] for u in bits(g.adj[v] & ~removed)))
    return Graph(len(keep), tuple(adj))


def component_masks(adj: tuple[int, ...] | list[int], alive: int) -> list[int]:
    """Connected components of the subgraph induced by the bitmask ``alive``."""
    comps = []
    while alive:
        seed = alive & -alive
        comp = seed
        frontier = seed
        while frontier:
            reach = 0
            f = frontier
            while f:
                low = f & -f
                reach |= adj[low.bit_length() - 1]
                f ^= low
            reach &= alive & ~comp
            comp |= reach
            frontier = reach
        comps.append(comp)
        alive &= ~comp
    return comps


@dataclass(frozen=True)
class ComponentSummary:
    component_orders: tuple[int, ...]

    @property
    def q(self) -> int:
        """Components of odd order at least three."""
        return sum(1 for c in self.component_orders if c % 2 == 1 and c >= 3)

    @property
    def i(self) -> int:
        """Isolated vertices."""
        return sum(1 for c in self.component_orders if c == 1)

    @property
    def order(self) -> int:
        return sum(self.component_orders)


def component_summary(g: Graph) -> ComponentSummary:
    orders = sorted((c.bit_count() for c in component_masks(g.adj, g.vertex_mask)), reverse=True)
    return ComponentSummary(tuple(orders))


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        raise GraphInputError("connectivity of the empty graph is undefined")
    return len(component_masks(g.adj, g.vertex_mask)) == 1


def _separates(g: Graph, removed: int) -> bool:
    alive = g.vertex_mask & ~removed
    return alive.bit_count() <= 1 or len(component_masks(g.adj, alive)) > 1


def vertex_connectivity(g: Graph) -> int:
    """Smallest vertex cut by brute force; K_n has connectivity n - 1."""
    if g.n < 2:
        raise GraphInputError("vertex connectivity needs at least 2 vertices")
    for size in range(g.n - 1):
        for s in combinations(range(g.n), size):
            if _separates(g, mask_of(s)):
                return size
    return g.n - 1


def is_t_connected(g: Graph, t: int) -> bool:
    """True iff vertex_connectivity(g) >= t, without computing the exact value."""
    if t <= 0:
        return True
    if g.n < 2 or g.n - 1 < t:
        return False
    for size in range(t):
        for s in combinations(range(g.n), size):
            if _separates(g, mask_of(s)):
                return False
    return True
