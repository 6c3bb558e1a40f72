"""Isomorph-free generation of connected graphs of small order.

Every connected graph on n >= 2 vertices has a vertex whose removal leaves
it connected (a leaf of any spanning tree), so the classes of order n are
obtained by attaching one new vertex to each class of order n - 1 with every
nonempty neighbourhood, then discarding isomorphic duplicates.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from .graph import Graph, UnsupportedError
from .io import to_graph6
from .iso import are_isomorphic, invariant

MAX_ENUMERATION_ORDER = 8
CONNECTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117}


def _extend(g: Graph, neighbourhood: int) -> Graph:
    n = g.n
    adj = [nb | ((neighbourhood >> v & 1) << n) for v, nb in enumerate(g.adj)]
    adj.append(neighbourhood)
    return Graph(n + 1, tuple(adj))


@lru_cache(maxsize=None)
def _connected_classes(n: int) -> tuple[Graph, ...]:
    if n == 1:
        return (Graph(1, (0,)),)
    buckets: dict[tuple, list[Graph]] = {}
    for parent in _connected_classes(n - 1):
        for nbh in range(1, 1 << (n - 1)):
            cand = _extend(parent, nbh)
            bucket = buckets.setdefault(invariant(cand), [])
            if not any(are_isomorphic(cand, rep) for rep in bucket):
                bucket.append(cand)
    reps = [g for bucket in buckets.values() for g in bucket]
    reps.sort(key=lambda g: (g.num_edges, to_graph6(g)))
    return tuple(reps)


def enumerate_connected(n: int) -> Iterator[Graph]:
    """One representative per isomorphism class of connected graphs of order n."""
    if n < 1:
        raise UnsupportedError("order must be at least 1")
    if n > MAX_ENUMERATION_ORDER:
        raise UnsupportedError(
            f"internal enumeration is capped at n={MAX_ENUMERATION_ORDER}; ingest a graph6 corpus instead"
        )
    yield from _connected_classes(n)
