"""Loopless multigraphs with ordered-pair edge counting.

Edges are stored as a multiplicity map keyed by the normalized (min, max)
vertex pair, iterated in sorted order so that every downstream sampler is
reproducible.  e(A, B) counts ordered pairs with multiplicity: an edge with
both endpoints in A and B contributes twice.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    EdgeNotInGraph,
    LoopEdge,
    TooLargeForExactCheck,
    VertexOutOfRange,
    ZeroMultiplicity,
)

EXACT_EXPANDER_LIMIT = 20


def _normalize_pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _edge_multiset(entries) -> dict[tuple[int, int], int]:
    """Accumulate (u, v) pairs or (u, v, mult) triples into a pair -> count map."""
    out: dict[tuple[int, int], int] = {}
    for entry in entries:
        if len(entry) == 2:
            u, v = entry
            m = 1
        else:
            u, v, m = entry
        key = _normalize_pair(int(u), int(v))
        out[key] = out.get(key, 0) + int(m)
    return out


class MultiGraph:
    """Immutable loopless multigraph on vertices 0..n-1."""

    def __init__(self, n: int, mult: dict[tuple[int, int], int]):
        self.n = int(n)
        self._mult = dict(sorted(mult.items()))
        self._degrees: np.ndarray | None = None
        self._adj: list[np.ndarray] | None = None
        self._adj_mult: list[np.ndarray] | None = None
        self._components: np.ndarray | None = None

    # -- construction ---------------------------------------------------------

    @classmethod
    def build(cls, n: int, edge_list: Iterable[Sequence[int]]) -> "MultiGraph":
        """Build from (u, v, multiplicity) entries; parallel entries accumulate."""
        n = int(n)
        if n < 0:
            raise VertexOutOfRange(f"negative vertex count {n}")
        mult: dict[tuple[int, int], int] = {}
        for entry in edge_list:
            if len(entry) == 2:
                u, v = entry
                m = 1
            else:
                u, v, m = entry
            u, v, m = int(u), int(v), int(m)
            if u == v:
                raise LoopEdge(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise VertexOutOfRange(f"edge ({u},{v}) outside 0..{n - 1}")
            if m < 1:
                raise ZeroMultiplicity(f"multiplicity {m} for edge ({u},{v})")
            key = _normalize_pair(u, v)
            mult[key] = mult.get(key, 0) + m
        return cls(n, mult)

    # -- basic accessors --------------------------------------------------------

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield (u, v, multiplicity) with u < v in sorted order."""
        for (u, v), m in self._mult.items():
            yield u, v, m

    def edge_pairs(self) -> list[tuple[int, int]]:
        return list(self._mult.keys())

    def multiplicity(self, u: int, v: int) -> int:
        return self._mult.get(_normalize_pair(u, v), 0)

    @property
    def num_edges(self) -> int:
        """Total edge multiplicity."""
        return sum(self._mult.values())

    @property
    def max_multiplicity(self) -> int:
        """Maximal number of parallel edges between any pair (1 for empty graphs)."""
        return max(self._mult.values(), default=1)

    @property
    def is_simple(self) -> bool:
        return self.max_multiplicity <= 1

    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            deg = np.zeros(self.n, dtype=np.int64)
            for (u, v), m in self._mult.items():
                deg[u] += m
                deg[v] += m
            self._degrees = deg
        return self._degrees

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    def _check_vertex_set(self, A: Iterable[int]) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        for a in A:
            a = int(a)
            if not (0 <= a < self.n):
                raise VertexOutOfRange(f"vertex {a} outside 0..{self.n - 1}")
            mask[a] = True
        return mask

    def adjacency_matrix(self, dtype=np.float64) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=dtype)
        for (u, v), m in self._mult.items():
            A[u, v] = m
            A[v, u] = m
        return A

    def adjacency_lists(self) -> tuple[list[np.ndarray], list[np.ndarray]]:
        """Per-vertex neighbor arrays and matching multiplicities, sorted."""
        if self._adj is None:
            nbrs: list[list[int]] = [[] for _ in range(self.n)]
            mults: list[list[int]] = [[] for _ in range(self.n)]
            for (u, v), m in self._mult.items():
                nbrs[u].append(v)
                mults[u].append(m)
                nbrs[v].append(u)
                mults[v].append(m)
            self._adj = [np.array(a, dtype=np.int64) for a in nbrs]
            self._adj_mult = [np.array(a, dtype=np.int64) for a in mults]
        return self._adj, self._adj_mult

    # -- pair counting ------------------------------------------------------------

    def pair_count(self, A: Iterable[int], B: Iterable[int]) -> int:
        """e(A, B): ordered pairs forming an edge, counted with multiplicity."""
        in_a = self._check_vertex_set(A)
        in_b = self._check_vertex_set(B)
        total = 0
        for (u, v), m in self._mult.items():
            if in_a[u] and in_b[v]:
                total += m
            if in_a[v] and in_b[u]:
                total += m
        return total

    def degree_into(self, v: int, mask: np.ndarray) -> int:
        """deg(v, A) for a boolean membership mask A."""
        nbrs, mults = self.adjacency_lists()
        if not (0 <= v < self.n):
            raise VertexOutOfRange(f"vertex {v}")
        a = nbrs[v]
        return int(mults[v][mask[a]].sum()) if len(a) else 0

    # -- editing --------------------------------------------------------------

    def contract(self, S: Iterable[Sequence[int]]) -> tuple["MultiGraph", np.ndarray]:
        """Contract the edges of S; loops are dropped, parallels accumulate.

        Returns the contracted graph and the old -> new vertex map.
        """
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for pair in _edge_multiset(S):
            u, v = pair
            if self.multiplicity(u, v) == 0:
                raise EdgeNotInGraph(f"edge {pair} not in graph")
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)

        roots: dict[int, int] = {}
        vmap = np.empty(self.n, dtype=np.int64)
        for v in range(self.n):
            r = find(v)
            if r not in roots:
                roots[r] = len(roots)
            vmap[v] = roots[r]

        mult: dict[tuple[int, int], int] = {}
        for (u, v), m in self._mult.items():
            a, b = int(vmap[u]), int(vmap[v])
            if a == b:
                continue
            key = _normalize_pair(a, b)
            mult[key] = mult.get(key, 0) + m
        return MultiGraph(len(roots), mult), vmap

    def delete(self, S: Iterable[Sequence[int]]) -> "MultiGraph":
        """Remove edge copies listed in S; (u, v) removes one copy, (u, v, m) removes m."""
        removals = _edge_multiset(S)
        mult = dict(self._mult)
        for pair, m in removals.items():
            have = mult.get(pair, 0)
            if have < m:
                raise EdgeNotInGraph(f"cannot remove {m} copies of {pair}, have {have}")
            if have == m:
                del mult[pair]
            else:
                mult[pair] = have - m
        return MultiGraph(self.n, mult)

    def induced_subgraph(self, A: Iterable[int]) -> tuple["MultiGraph", dict[int, int]]:
        """Subgraph on A with vertices relabeled 0..|A|-1 (sorted order)."""
        verts = sorted(set(int(a) for a in A))
        for a in verts:
            if not (0 <= a < self.n):
                raise VertexOutOfRange(f"vertex {a}")
        index = {v: i for i, v in enumerate(verts)}
        mult = {}
        for (u, v), m in self._mult.items():
            if u in index and v in index:
                mult[_normalize_pair(index[u], index[v])] = m
        return MultiGraph(len(verts), mult), index

    # -- connectivity -----------------------------------------------------------

    def component_labels(self) -> np.ndarray:
        if self._components is None:
            parent = list(range(self.n))

            def find(x: int) -> int:
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for (u, v) in self._mult:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[max(ru, rv)] = min(ru, rv)
            labels = np.empty(self.n, dtype=np.int64)
            seen: dict[int, int] = {}
            for v in range(self.n):
                r = find(v)
                if r not in seen:
                    seen[r] = len(seen)
                labels[v] = seen[r]
            self._components = labels
        return self._components

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return int(self.component_labels().max()) == 0

    # -- exact expansion -----------------------------------------------------------

    def is_gamma_expander(self, gamma: float, exhaustive_limit: int = EXACT_EXPANDER_LIMIT) -> bool:
        """Exact check of e(U, V\\U) >= gamma |U| (n - |U|) for every U."""
        return self.exact_expansion(exhaustive_limit) >= gamma - 1e-12

    def exact_expansion(self, exhaustive_limit: int = EXACT_EXPANDER_LIMIT) -> float:
        """min over proper nonempty U of e(U, V\\U) / (|U| |V\\U|), by enumeration.

        Subsets are walked in Gray-code order so each step updates the cut in
        O(deg).  Refuses above `exhaustive_limit` vertices.
        """
        n = self.n
        if n > exhaustive_limit:
            raise TooLargeForExactCheck(
                f"{n} vertices > limit {exhaustive_limit}; use the spectral bound instead"
            )
        if n <= 1:
            return float("inf")
        nbrs, mults = self.adjacency_lists()
        deg = self.degrees
        in_u = np.zeros(n, dtype=bool)
        cut = 0
        size = 0
        best = float("inf")
        # vertex n-1 stays outside U; every unordered split is still visited once
        for i in range(1, 1 << (n - 1)):
            v = (i & -i).bit_length() - 1
            into_u = int(mults[v][in_u[nbrs[v]]].sum()) if len(nbrs[v]) else 0
            if in_u[v]:
                in_u[v] = False
                cut -= deg[v] - 2 * into_u
                size -= 1
            else:
                in_u[v] = True
                cut += deg[v] - 2 * into_u
                size += 1
            ratio = cut / (size * (n - size))
            if ratio < best:
                best = ratio
        return float(best)

    # -- textual edge-list format -----------------------------------------------

    def to_edge_list_text(self) -> str:
        lines = [f"{self.n} {len(self._mult)}"]
        for u, v, m in self.edges():
            lines.append(f"{u} {v} {m}" if m != 1 else f"{u} {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list_text(cls, text: str) -> "MultiGraph":
        rows = [ln for ln in (line.strip() for line in text.splitlines()) if ln]
        if not rows:
            raise VertexOutOfRange("empty edge-list file")
        head = rows[0].split()
        if len(head) != 2:
            raise VertexOutOfRange(f"bad header {rows[0]!r}, expected 'n m'")
        n, m = int(head[0]), int(head[1])
        if len(rows) - 1 != m:
            raise VertexOutOfRange(f"header promises {m} edge lines, found {len(rows) - 1}")
        edges = []
        for ln in rows[1:]:
            parts = ln.split()
            if len(parts) == 2:
                edges.append((int(parts[0]), int(parts[1]), 1))
            elif len(parts) == 3:
                edges.append((int(parts[0]), int(parts[1]), int(parts[2])))
            else:
                raise VertexOutOfRange(f"bad edge line {ln!r}")
        return cls.build(n, edges)

    # -- misc ----------------------------------------------------------------------

    def __repr__(self) -> str:
        return f"MultiGraph(n={self.n}, edges={len(self._mult)}, total_mult={self.num_edges})"

    def check_handshake(self) -> None:
        assert int(self.degrees.sum()) == 2 * self.num_edges


def read_edge_list(path) -> MultiGraph:
    with open(path, "r", encoding="ascii") as fh:
        return MultiGraph.from_edge_list_text(fh.read())


def write_edge_list(G: MultiGraph, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(G.to_edge_list_text())


def complete_graph(n: int) -> MultiGraph:
    return MultiGraph.build(n, [(i, j, 1) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> MultiGraph:
    return MultiGraph.build(n, [(i, (i + 1) % n, 1) for i in range(n)])


def path_graph(n: int) -> MultiGraph:
    return MultiGraph.build(n, [(i, i + 1, 1) for i in range(n - 1)])
