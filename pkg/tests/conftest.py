"""Shared generators for seeded random test instances."""
import numpy as np
import pytest

from ustlocal.multigraph import MultiGraph


def random_connected_graph(rng, n, p=0.5, max_mult=1):
    """Random graph conditioned on connectivity (resample until connected)."""
    while True:
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < p:
                    m = 1 if max_mult == 1 else int(rng.integers(1, max_mult + 1))
                    edges.append((u, v, m))
        G = MultiGraph.build(n, edges)
        if G.is_connected():
            return G


def random_connected_min_degree(rng, n, p, min_degree):
    while True:
        G = random_connected_graph(rng, n, p)
        if int(G.degrees.min()) >= min_degree:
            return G


def gnp(rng, n, p):
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return MultiGraph.build(n, [(int(u), int(v), 1) for u, v in zip(iu[keep], ju[keep])])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
