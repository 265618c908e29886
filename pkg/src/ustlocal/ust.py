"""Exact-uniform spanning tree sampling and an exhaustive enumeration oracle.

Sampling is Wilson's loop-erased-random-walk algorithm rooted at vertex 0
(uniformity is root-independent; fixing the root aids reproducibility).
Parallel copies are distinguishable: a tree edge is (u, v, copy).
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .electric import log_spanning_tree_count
from .errors import (
    ConditioningDisconnects,
    GraphDisconnected,
    IncludeHasCycle,
    PreconditionError,
    TooManyTrees,
)
from .multigraph import MultiGraph, _edge_multiset, _normalize_pair
from .rng import UniformBuffer, stream


class SpanningTree:
    """A spanning tree of an n-vertex host graph as a set of (u, v, copy) edges."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int]]):
        self.n = int(n)
        norm = []
        for (u, v, c) in edges:
            a, b = _normalize_pair(int(u), int(v))
            norm.append((a, b, int(c)))
        self.edges = tuple(sorted(norm))
        if len(self.edges) != self.n - 1:
            raise PreconditionError(
                f"{len(self.edges)} edges cannot span {self.n} vertices"
            )
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (u, v, _c) in self.edges:
            ru, rv = find(u), find(v)
            if ru == rv:
                raise PreconditionError("edge set contains a cycle")
            parent[ru] = rv
        self._adj: list[list[int]] | None = None

    def adjacency(self) -> list[list[int]]:
        if self._adj is None:
            adj: list[list[int]] = [[] for _ in range(self.n)]
            for (u, v, _c) in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            self._adj = adj
        return self._adj

    def edge_pairs(self) -> list[tuple[int, int]]:
        return [(u, v) for (u, v, _c) in self.edges]

    def validate_against(self, G: MultiGraph) -> None:
        for (u, v, c) in self.edges:
            assert 0 <= c < G.multiplicity(u, v), f"edge ({u},{v},{c}) absent from host"

    def __eq__(self, other) -> bool:
        return isinstance(other, SpanningTree) and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"SpanningTree(n={self.n})"


class _NeighborSampler:
    """Neighbor sampling proportional to multiplicity, with a uniform fast path."""

    def __init__(self, G: MultiGraph):
        nbrs, mults = G.adjacency_lists()
        self.nbrs = nbrs
        self.uniform = [bool(len(m) and (m == m[0]).all()) for m in mults]
        self.cumw = [np.cumsum(m, dtype=np.float64) for m in mults]

    def step(self, v: int, unif) -> int:
        row = self.nbrs[v]
        if self.uniform[v]:
            j = int(unif() * len(row))
            if j == len(row):
                j -= 1
            return int(row[j])
        cw = self.cumw[v]
        j = int(np.searchsorted(cw, unif() * cw[-1], side="right"))
        if j == len(row):
            j -= 1
        return int(row[j])


def _sampler_for(G: MultiGraph) -> _NeighborSampler:
    sampler = getattr(G, "_nbr_sampler", None)
    if sampler is None:
        sampler = _NeighborSampler(G)
        G._nbr_sampler = sampler
    return sampler


def _assign_copies(G: MultiGraph, pairs: Sequence[tuple[int, int]], rng) -> list[tuple[int, int, int]]:
    """Pick which parallel copy realizes each tree edge, uniformly at random."""
    out = []
    for (u, v) in pairs:
        m = G.multiplicity(u, v)
        c = int(rng.integers(0, m)) if m > 1 else 0
        out.append((u, v, c))
    return out


def wilson_sample(G: MultiGraph, seed: int, root: int = 0) -> SpanningTree:
    """Exact-uniform spanning tree by loop-erased random walks."""
    if not G.is_connected():
        raise GraphDisconnected("no spanning tree in a disconnected graph")
    if G.n == 1:
        return SpanningTree(1, [])
    rng = stream(seed)
    unif = UniformBuffer(rng)
    sampler = _sampler_for(G)
    in_tree = [False] * G.n
    nxt = [-1] * G.n
    in_tree[root] = True
    for start in range(G.n):
        u = start
        while not in_tree[u]:
            nxt[u] = sampler.step(u, unif)
            u = nxt[u]
        u = start
        while not in_tree[u]:
            in_tree[u] = True
            u = nxt[u]
    pairs = [(v, nxt[v]) for v in range(G.n) if v != root]
    return SpanningTree(G.n, _assign_copies(G, pairs, rng))


def aldous_broder_sample(G: MultiGraph, seed: int, root: int = 0) -> SpanningTree:
    """First-entrance random-walk sampler, kept as an independent cross-check."""
    if not G.is_connected():
        raise GraphDisconnected("no spanning tree in a disconnected graph")
    if G.n == 1:
        return SpanningTree(1, [])
    rng = stream(seed)
    unif = UniformBuffer(rng)
    sampler = _sampler_for(G)
    visited = [False] * G.n
    visited[root] = True
    remaining = G.n - 1
    pairs = []
    cur = root
    while remaining:
        nxt = sampler.step(cur, unif)
        if not visited[nxt]:
            visited[nxt] = True
            remaining -= 1
            pairs.append((nxt, cur))
        cur = nxt
    return SpanningTree(G.n, _assign_copies(G, pairs, rng))


def conditional_sample(
    G: MultiGraph,
    include: Iterable[Sequence[int]],
    exclude: Iterable[Sequence[int]],
    seed: int,
) -> SpanningTree:
    """UST of G conditioned on include being present and exclude absent.

    Realized through the spatial Markov property: contract the include set,
    delete the exclude set, sample, and lift edges back through the
    contraction.  Exclude entries follow delete() semantics: (u, v) removes
    one parallel copy, (u, v, m) removes m.
    """
    include_pairs = list(_edge_multiset(include).keys())
    parent = list(range(G.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (u, v) in include_pairs:
        if G.multiplicity(u, v) == 0:
            raise ConditioningDisconnects(f"include edge ({u},{v}) not in graph")
        ru, rv = find(u), find(v)
        if ru == rv:
            raise IncludeHasCycle(f"include set closes a cycle at ({u},{v})")
        parent[max(ru, rv)] = min(ru, rv)

    try:
        stripped = G.delete(exclude)
    except Exception as exc:  # noqa: BLE001 - surface as a conditioning failure
        raise ConditioningDisconnects(str(exc)) from exc
    for (u, v) in include_pairs:
        if stripped.multiplicity(u, v) == 0:
            raise ConditioningDisconnects(
                f"every copy of include edge ({u},{v}) is excluded"
            )

    roots: dict[int, int] = {}
    vmap = np.empty(G.n, dtype=np.int64)
    for v in range(G.n):
        r = find(v)
        if r not in roots:
            roots[r] = len(roots)
        vmap[v] = roots[r]
    n_q = len(roots)

    # quotient multigraph plus a lift table from quotient pairs back to host pairs
    qmult: dict[tuple[int, int], int] = {}
    lift: dict[tuple[int, int], list[tuple[tuple[int, int], int]]] = {}
    for (u, v, m) in stripped.edges():
        a, b = int(vmap[u]), int(vmap[v])
        if a == b:
            continue
        key = _normalize_pair(a, b)
        qmult[key] = qmult.get(key, 0) + m
        lift.setdefault(key, []).append(((u, v), m))
    quotient = MultiGraph(n_q, qmult)
    if not quotient.is_connected():
        raise ConditioningDisconnects("conditioning leaves no spanning tree")

    qtree = wilson_sample(quotient, seed)
    edges: list[tuple[int, int, int]] = [(u, v, 0) for (u, v) in include_pairs]
    for (a, b, c) in qtree.edges:
        offset = c
        for (pair, m) in lift[(a, b)]:
            if offset < m:
                edges.append((pair[0], pair[1], offset))
                break
            offset -= m
    return SpanningTree(G.n, edges)


def enumerate_spanning_trees(G: MultiGraph, max_trees: int = 10**6) -> list[SpanningTree]:
    """All spanning trees, each parallel-edge choice counted separately.

    Deletion-contraction recursion: the first edge copy either belongs to the
    tree (contract) or not (delete), so every tree is produced exactly once.
    """
    if not G.is_connected():
        raise GraphDisconnected("no spanning tree in a disconnected graph")
    if G.n > 12:
        raise TooManyTrees(f"{G.n} vertices > enumeration limit 12")
    log_t = log_spanning_tree_count(G)
    if log_t > math.log(max_trees) + 1e-9:
        raise TooManyTrees(f"about exp({log_t:.1f}) trees > cap {max_trees}")

    # edge copies carry their original identity through contractions
    base_edges = []
    for (u, v, m) in G.edges():
        for c in range(m):
            base_edges.append((u, v, (u, v, c)))

    trees: list[SpanningTree] = []

    def connected(num_labels: int, edges, labels_alive) -> bool:
        parent = {x: x for x in labels_alive}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        comps = len(parent)
        for (a, b, _eid) in edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                comps -= 1
        return comps == 1

    def rec(labels_alive: frozenset, edges: list, chosen: list) -> None:
        if len(labels_alive) == 1:
            trees.append(SpanningTree(G.n, list(chosen)))
            return
        a0, b0, eid0 = edges[0]
        rest = edges[1:]
        # branch 1: eid0 in the tree -> contract b0 into a0
        merged = []
        for (a, b, eid) in rest:
            na = a0 if a == b0 else a
            nb = a0 if b == b0 else b
            if na != nb:
                merged.append((na, nb, eid))
        rec(labels_alive - {b0}, merged, chosen + [eid0])
        # branch 2: eid0 not in the tree -> drop it if connectivity survives
        if connected(len(labels_alive), rest, labels_alive):
            rec(labels_alive, rest, chosen)

    rec(frozenset(range(G.n)), base_edges, [])
    return trees
