"""Rooted tree patterns, canonical codes, balls and local censuses.

Canonical codes are length-prefixed nested parentheses over sorted child
codes: a vertex with subtree size s and children codes c_1 <= ... <= c_k
serializes as "(s:c_1...c_k)".  Equal codes <=> root-preserving isomorphism.
"""
from __future__ import annotations

import json
from collections import Counter
from functools import lru_cache
from math import factorial
from typing import Iterable

from .errors import InvalidVertices, PartitionMismatch, VertexOutOfRange


class RootedTree:
    """Finite rooted tree given by a parent array (root marked -1)."""

    def __init__(self, parent: Iterable[int]):
        parent = tuple(int(p) for p in parent)
        n = len(parent)
        roots = [i for i, p in enumerate(parent) if p == -1]
        if len(roots) != 1:
            raise InvalidVertices(f"need exactly one root, found {len(roots)}")
        for i, p in enumerate(parent):
            if p != -1 and not (0 <= p < n):
                raise InvalidVertices(f"parent {p} of vertex {i} out of range")
        self.parent = parent
        self.root = roots[0]
        self.size = n
        children: list[list[int]] = [[] for _ in range(n)]
        for i, p in enumerate(parent):
            if p != -1:
                children[p].append(i)
        self.children = [tuple(c) for c in children]
        heights = [-1] * n
        heights[self.root] = 0
        stack = [self.root]
        seen = 1
        while stack:
            x = stack.pop()
            for c in self.children[x]:
                heights[c] = heights[x] + 1
                stack.append(c)
                seen += 1
        if seen != n:
            raise InvalidVertices("parent array contains a cycle")
        self.heights = tuple(heights)
        self.height = max(heights)
        self._codes: list[str] | None = None

    # -- canonical form -------------------------------------------------------

    def _subtree_codes(self) -> list[str]:
        if self._codes is None:
            codes = [""] * self.size
            sizes = [1] * self.size
            order = sorted(range(self.size), key=lambda v: -self.heights[v])
            for v in order:
                kids = sorted(codes[c] for c in self.children[v])
                sizes[v] = 1 + sum(sizes[c] for c in self.children[v])
                codes[v] = f"({sizes[v]}:{''.join(kids)})"
            self._codes = codes
        return self._codes

    def canonical_code(self) -> str:
        return self._subtree_codes()[self.root]

    def stab_size(self) -> int:
        """Order of the root-preserving automorphism group."""
        codes = self._subtree_codes()
        total = 1
        for v in range(self.size):
            for mult in Counter(codes[c] for c in self.children[v]).values():
                total *= factorial(mult)
        return total

    # -- normalization --------------------------------------------------------

    def normalized(self) -> tuple["RootedTree", int]:
        """Reorder so heights are nondecreasing; return (tree, p).

        p is the first index at maximal height, so positions p..size-1 are
        exactly the vertices at the tree's height.  Ties inside a height level
        break by subtree code, then original index.
        """
        codes = self._subtree_codes()
        order = sorted(range(self.size), key=lambda v: (self.heights[v], codes[v], v))
        new_index = {v: i for i, v in enumerate(order)}
        parent = [-1] * self.size
        for i, v in enumerate(order):
            if self.parent[v] != -1:
                parent[i] = new_index[self.parent[v]]
        tree = RootedTree(parent)
        p = next(i for i, v in enumerate(order) if self.heights[v] == self.height)
        return tree, p

    def edge_list(self) -> list[tuple[int, int]]:
        return [(p, i) for i, p in enumerate(self.parent) if p != -1]

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({"parent": list(self.parent)})

    @classmethod
    def from_json(cls, text: str) -> "RootedTree":
        data = json.loads(text)
        return cls(data["parent"])

    def __repr__(self) -> str:
        return f"RootedTree({self.canonical_code()})"


def rooted_isomorphic(t1: RootedTree, t2: RootedTree) -> bool:
    return t1.canonical_code() == t2.canonical_code()


def truncate(tree: RootedTree, r: int) -> RootedTree:
    """Restrict to vertices at height <= r (an induced rooted subtree)."""
    keep = [v for v in range(tree.size) if tree.heights[v] <= r]
    new_index = {v: i for i, v in enumerate(keep)}
    parent = [-1 if tree.parent[v] == -1 else new_index[tree.parent[v]] for v in keep]
    return RootedTree(parent)


# -- balls and censuses over spanning trees ------------------------------------


def ball(tree, v: int, r: int) -> RootedTree:
    """B_T(v, r) as a rooted tree in the normalized height order."""
    if not (0 <= v < tree.n):
        raise VertexOutOfRange(f"vertex {v}")
    if r < 0:
        raise VertexOutOfRange(f"radius {r}")
    adj = tree.adjacency()
    dist = {v: 0}
    order = [v]
    head = 0
    while head < len(order):
        x = order[head]
        head += 1
        if dist[x] == r:
            continue
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                order.append(y)
    parent = [-1] * len(order)
    index = {x: i for i, x in enumerate(order)}
    for x in order:
        if x != v:
            for y in adj[x]:
                if y in dist and dist[y] == dist[x] - 1:
                    parent[index[x]] = index[y]
                    break
    raw = RootedTree(parent)
    return raw.normalized()[0]


def local_census(tree, r: int) -> dict[str, int]:
    """Counts of ball codes over all n root choices; values sum to n."""
    census: Counter[str] = Counter()
    for v in range(tree.n):
        census[ball(tree, v, r).canonical_code()] += 1
    return dict(census)


def degree_counts(tree) -> dict[int, int]:
    """L_k = number of vertices of tree-degree k."""
    counts: Counter[int] = Counter(len(a) for a in tree.adjacency())
    return dict(counts)


def cross_edge_count(tree, decomposition) -> int:
    """|O|: tree edges between parts or touching the residual set V_0."""
    labels = decomposition.labels
    if len(labels) != tree.n:
        raise PartitionMismatch(f"partition covers {len(labels)} vertices, tree has {tree.n}")
    total = 0
    for u, v, _copy in tree.edges:
        if labels[u] != labels[v] or labels[u] == 0 or labels[v] == 0:
            total += 1
    return total


# -- pattern enumeration ---------------------------------------------------------


@lru_cache(maxsize=None)
def _trees_of_size(size: int) -> tuple[tuple[int, ...], ...]:
    """All rooted trees on `size` vertices, as parent tuples, one per iso class."""
    if size == 1:
        return ((-1,),)
    results: list[tuple[int, ...]] = []

    def splits(budget: int, min_size: int):
        # nondecreasing child subtree sizes avoid permuted duplicates
        if budget == 0:
            yield []
            return
        for s in range(min_size, budget + 1):
            for rest in splits(budget - s, s):
                yield [s] + rest

    def assemble(sizes: list[int], chosen: list[tuple[int, ...]], start_indices: list[int]):
        if len(chosen) == len(sizes):
            parent = [-1]
            offset = 1
            for sub in chosen:
                parent.extend(offset + p if p != -1 else 0 for p in sub)
                # root of the subtree attaches to the global root
                parent[offset] = 0
                offset += len(sub)
            results.append(tuple(parent))
            return
        i = len(chosen)
        pool = _trees_of_size(sizes[i])
        # equal-size children chosen with nondecreasing pool index: no duplicates
        lo = start_indices[i - 1] if i > 0 and sizes[i] == sizes[i - 1] else 0
        for j in range(lo, len(pool)):
            start_indices[i] = j
            assemble(sizes, chosen + [pool[j]], start_indices)

    for sizes in splits(size - 1, 1):
        assemble(sizes, [], [0] * len(sizes))
    # dedupe defensively by canonical code, deterministic order
    by_code = {}
    for parent in results:
        code = RootedTree(parent).canonical_code()
        by_code.setdefault(code, parent)
    return tuple(parent for _code, parent in sorted(by_code.items()))


def enumerate_rooted_trees(
    max_vertices: int, min_height: int = 0, max_height: int | None = None
) -> list[RootedTree]:
    """All rooted-tree isomorphism classes with <= max_vertices vertices."""
    out = []
    for size in range(1, max_vertices + 1):
        for parent in _trees_of_size(size):
            t = RootedTree(parent)
            if t.height < min_height:
                continue
            if max_height is not None and t.height > max_height:
                continue
            out.append(t)
    return out
