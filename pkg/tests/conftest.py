import random
from itertools import combinations

import pytest

from vrgc.graphs import DiGraph

# Six-node worked example used throughout: a=0, b=1, c=2, d=3, e=4, f=5.
DEMO6_EDGES = [(0, 1), (1, 2), (1, 3), (2, 3), (3, 5), (4, 3)]


@pytest.fixture
def demo6() -> DiGraph:
    return DiGraph.from_edges(6, DEMO6_EDGES)


def random_digraph(rng: random.Random, n: int, m: int) -> DiGraph:
    """Uniform simple digraph with at most m edges (duplicates dropped)."""
    g = DiGraph(n)
    for _ in range(m):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            g.out_adj[u].add(v)
            g.in_adj[v].add(u)
    return g


def brute_connected_sets(g: DiGraph, k_min: int, k_max: int) -> set:
    """All-subsets filtering oracle for connected-set enumeration."""
    found = set()
    nodes = sorted(g.active)
    for k in range(k_min, k_max + 1):
        for combo in combinations(nodes, k):
            if g.is_weakly_connected(set(combo)):
                found.add(combo)
    return found
