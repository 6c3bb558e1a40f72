"""Graph isomorphism by colour refinement and backtracking.

Adequate for the orders used here (n <= 16). Colours are derived only from
the graph structure, so two isomorphic graphs always produce the same
refinement trace and the same colour classes up to relabelling.
"""

from __future__ import annotations

from functools import lru_cache

from .graph import Graph, bits


def _initial_colours(g: Graph) -> list[tuple[int, int]]:
    # (degree, triangles through v)
    out = []
    for v in range(g.n):
        nb = g.adj[v]
        tri = sum((g.adj[u] & nb).bit_count() for u in bits(nb)) // 2
        out.append((nb.bit_count(), tri))
    return out


@lru_cache(maxsize=1 << 16)
def refine(g: Graph) -> tuple[tuple[int, ...], tuple]:
    """Stable colouring of ``g`` plus a trace that is an isomorphism invariant."""
    sigs = _initial_colours(g)
    table = sorted(set(sigs))
    colours = [table.index(s) for s in sigs]
    trace = [tuple(sorted(sigs))]
    nbrs = [bits(nb) for nb in g.adj]
    while True:
        sigs2 = [
            (colours[v], tuple(sorted([colours[u] for u in nbrs[v]])))
            for v in range(g.n)
        ]
        table = sorted(set(sigs2))
        index = {s: i for i, s in enumerate(table)}
        new = [index[s] for s in sigs2]
        trace.append(tuple(sorted(sigs2)))
        if len(table) == len(set(colours)):
            return tuple(new), tuple(trace)
        colours = new


def invariant(g: Graph) -> tuple:
    """Hashable isomorphism invariant (equal for isomorphic graphs)."""
    return (g.n, g.num_edges, refine(g)[1])


def find_isomorphism(g1: Graph, g2: Graph) -> list[int] | None:
    """Return ``perm`` with g1.relabel(perm) == g2, or None."""
    if g1.n != g2.n or g1.num_edges != g2.num_edges:
        return None
    c1, t1 = refine(g1)
    c2, t2 = refine(g2)
    if t1 != t2:
        return None
    n = g1.n
    # smallest colour classes first, then prefer vertices adjacent to ones already placed
    class_size = {}
    for c in c1:
        class_size[c] = class_size.get(c, 0) + 1
    order: list[int] = []
    placed = 0
    remaining = set(range(n))
    while remaining:
        v = min(
            remaining,
            key=lambda u: (-(g1.adj[u] & placed).bit_count(), class_size[c1[u]], u),
        )
        order.append(v)
        placed |= 1 << v
        remaining.discard(v)
    candidates = {c: [u for u in range(n) if c2[u] == c] for c in set(c2)}
    mapping = [-1] * n
    used = 0

    def extend(depth: int) -> bool:
        nonlocal used
        if depth == n:
            return True
        v = order[depth]
        for w in candidates[c1[v]]:
            if used >> w & 1:
                continue
            ok = True
            for u in order[:depth]:
                if g1.has_edge(u, v) != g2.has_edge(mapping[u], w):
                    ok = False
                    break
            if ok:
                mapping[v] = w
                used |= 1 << w
                if extend(depth + 1):
                    return True
                used &= ~(1 << w)
                mapping[v] = -1
        return False

    return mapping if extend(0) else None


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    return find_isomorphism(g1, g2) is not None
