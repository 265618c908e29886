import math
from collections import Counter

import numpy as np
import pytest
import scipy.special
import scipy.stats

from ustlocal.electric import edge_ust_probability
from ustlocal.errors import (
    ConditioningDisconnects,
    GraphDisconnected,
    IncludeHasCycle,
    TooManyTrees,
)
from ustlocal.multigraph import MultiGraph, complete_graph, cycle_graph, path_graph
from ustlocal.ust import (
    aldous_broder_sample,
    conditional_sample,
    enumerate_spanning_trees,
    wilson_sample,
)

from conftest import random_connected_graph


def test_enumerate_cycle():
    trees = enumerate_spanning_trees(cycle_graph(4))
    assert len(trees) == 4
    assert len(set(t.edges for t in trees)) == 4


def test_enumerate_k4():
    assert len(enumerate_spanning_trees(complete_graph(4))) == 16


def test_enumerate_double_edge():
    trees = enumerate_spanning_trees(MultiGraph.build(2, [(0, 1, 2)]))
    assert sorted(t.edges for t in trees) == [((0, 1, 0),), ((0, 1, 1),)]


def test_enumerate_count_matches_matrix_tree(rng):
    from ustlocal.electric import log_spanning_tree_count

    for _ in range(8):
        G = random_connected_graph(rng, 6, 0.7, max_mult=2)
        trees = enumerate_spanning_trees(G)
        assert len(trees) == round(math.exp(log_spanning_tree_count(G)))
        assert len(set(t.edges for t in trees)) == len(trees)


def test_enumerate_budget():
    with pytest.raises(TooManyTrees):
        enumerate_spanning_trees(complete_graph(13))
    with pytest.raises(TooManyTrees):
        enumerate_spanning_trees(complete_graph(10), max_trees=100)


def test_wilson_on_tree_returns_it():
    G = path_graph(6)
    t = wilson_sample(G, seed=5)
    assert t.edge_pairs() == [(i, i + 1) for i in range(5)]


def test_wilson_disconnected():
    with pytest.raises(GraphDisconnected):
        wilson_sample(MultiGraph.build(3, [(0, 1, 1)]), seed=1)


def test_wilson_deterministic():
    G = complete_graph(8)
    assert wilson_sample(G, seed=9).edges == wilson_sample(G, seed=9).edges


def _chi_square_uniform(sampler, G, samples, seed0):
    support = {t.edges: i for i, t in enumerate(enumerate_spanning_trees(G))}
    counts = np.zeros(len(support))
    for i in range(samples):
        t = sampler(G, seed0 + i)
        counts[support[t.edges]] += 1
    stat, p = scipy.stats.chisquare(counts)
    return p


def test_wilson_uniform_c4():
    assert _chi_square_uniform(wilson_sample, cycle_graph(4), 12000, 100) > 1e-3


def test_wilson_uniform_k4():
    assert _chi_square_uniform(wilson_sample, complete_graph(4), 16000, 4000) > 1e-3


def test_wilson_uniform_multigraph():
    G = MultiGraph.build(3, [(0, 1, 2), (1, 2, 1), (0, 2, 1)])
    assert _chi_square_uniform(wilson_sample, G, 12000, 77000) > 1e-3


def test_aldous_broder_uniform_c4():
    assert _chi_square_uniform(aldous_broder_sample, cycle_graph(4), 12000, 900000) > 1e-3


def test_wilson_edge_frequency_matches_kirchhoff(rng):
    G = random_connected_graph(rng, 6, 0.7)
    samples = 4000
    counts = Counter()
    for i in range(samples):
        counts.update(wilson_sample(G, seed=31337 + i).edge_pairs())
    for (u, v, _m) in G.edges():
        p = edge_ust_probability(G, (u, v))
        se = math.sqrt(p * (1 - p) / samples)
        assert abs(counts[(u, v)] / samples - p) <= 4 * max(se, 1e-3)


def test_conditional_include_triangle():
    G = complete_graph(3)
    counts = Counter()
    for i in range(4000):
        t = conditional_sample(G, include=[(0, 1)], exclude=[], seed=i)
        assert (0, 1, 0) in t.edges
        counts[t.edges] += 1
    assert len(counts) == 2
    _stat, p = scipy.stats.chisquare(list(counts.values()))
    assert p > 1e-3


def test_conditional_exclude_triangle():
    G = complete_graph(3)
    t = conditional_sample(G, include=[], exclude=[(0, 1)], seed=3)
    assert t.edge_pairs() == [(0, 2), (1, 2)]


def test_conditional_exclude_bridge():
    G = MultiGraph.build(4, [(0, 1, 1), (0, 2, 1), (1, 2, 1), (2, 3, 1)])
    with pytest.raises(ConditioningDisconnects):
        conditional_sample(G, include=[], exclude=[(2, 3)], seed=1)


def test_conditional_include_cycle():
    with pytest.raises(IncludeHasCycle):
        conditional_sample(complete_graph(3), include=[(0, 1), (1, 2), (0, 2)], exclude=[], seed=1)


def test_conditional_matches_filtered_enumeration(rng):
    G = random_connected_graph(rng, 6, 0.7)
    pairs = G.edge_pairs()
    include = [pairs[0]]
    exclude = [pairs[-1]] if pairs[-1] != pairs[0] else []
    law = [
        t.edges
        for t in enumerate_spanning_trees(G)
        if (include[0][0], include[0][1], 0) in t.edges
        and all((e[0], e[1], 0) not in t.edges for e in exclude)
    ]
    if not law:
        pytest.skip("conditioning unsatisfiable for this draw")
    support = {edges: i for i, edges in enumerate(law)}
    counts = np.zeros(len(law))
    for i in range(6000):
        t = conditional_sample(G, include, exclude, seed=50000 + i)
        counts[support[t.edges]] += 1
    _stat, p = scipy.stats.chisquare(counts)
    assert p > 1e-3


def test_prufer_degree_law():
    # degree of a fixed vertex in the UST of K_n is 1 + Bin(n-2, 1/n); the KS
    # statistic is evaluated at the integers (both CDFs right-continuous),
    # with the continuous Kolmogorov p-value, which is conservative here
    n = 50
    G = complete_graph(n)
    samples = 3000
    degs = np.array(
        [len(wilson_sample(G, seed=7_000_000 + i).adjacency()[17]) for i in range(samples)]
    )
    dist = scipy.stats.binom(n - 2, 1.0 / n)
    grid = np.arange(0, degs.max() + 2)
    emp = np.searchsorted(np.sort(degs), grid, side="right") / samples
    model = dist.cdf(grid - 1)
    d_stat = np.abs(emp - model).max()
    pvalue = scipy.special.kolmogorov(math.sqrt(samples) * d_stat)
    assert pvalue > 1e-3


def test_spanning_tree_validates_against_host(rng):
    G = random_connected_graph(rng, 7, 0.6, max_mult=2)
    for i in range(5):
        wilson_sample(G, seed=i).validate_against(G)
        aldous_broder_sample(G, seed=i).validate_against(G)


def test_conditional_contradictory_exclusion():
    G = MultiGraph.build(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    with pytest.raises(ConditioningDisconnects):
        conditional_sample(G, include=[(0, 1)], exclude=[(0, 1)], seed=1)
    # with a parallel copy left over the conditioning is consistent
    H = MultiGraph.build(3, [(0, 1, 2), (1, 2, 1), (0, 2, 1)])
    t = conditional_sample(H, include=[(0, 1)], exclude=[(0, 1)], seed=1)
    assert (0, 1) in t.edge_pairs()
