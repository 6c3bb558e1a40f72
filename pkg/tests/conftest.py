import itertools

import pytest
from hypothesis import HealthCheck, settings

from spectral_kmatch.enumerate import enumerate_connected
from spectral_kmatch.graph import Graph, disjoint_union

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


class _LazyClasses(dict):
    def __missing__(self, n):
        self[n] = list(enumerate_connected(n))
        return self[n]


@pytest.fixture(scope="session")
def connected_by_order():
    """Connected isomorphism classes by order, built on first use (n=8 takes ~10 s)."""
    return _LazyClasses()


def all_graphs_up_to(max_n: int, connected: dict) -> list[Graph]:
    """Every graph of order <= max_n up to isomorphism, as unions of connected classes."""
    out = []
    for n in range(1, max_n + 1):
        for orders in _partitions(n):
            pools = []
            for size, mult in _multiplicities(orders):
                pools.append(list(itertools.combinations_with_replacement(connected[size], mult)))
            for combo in itertools.product(*pools):
                parts = [g for group in combo for g in group]
                out.append(disjoint_union(*parts))
    return out


def _partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield [first] + rest


def _multiplicities(orders):
    seen = {}
    for o in orders:
        seen[o] = seen.get(o, 0) + 1
    return sorted(seen.items())


def random_graph(draw_bits, n):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return Graph.from_edges(n, [e for e, b in zip(pairs, draw_bits) if b])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
