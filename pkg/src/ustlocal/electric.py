"""Laplacian-based electrical computations.

Effective resistance via a grounded dense Cholesky solve, Kirchhoff edge
probabilities, and matrix-tree counting in log space (t(K_100) ~ e^451, so
raw determinants would overflow).
"""
from __future__ import annotations

import math

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateGraphon,
    EdgeNotInGraph,
    GraphDisconnected,
    NotSimple,
    NumericError,
    ParameterOutOfRange,
    SameVertex,
)
from .multigraph import MultiGraph


class LaplacianSystem:
    """Dense graph Laplacian with a cached Cholesky factor of the grounded matrix.

    Read-only after construction; concurrent solves against one factorization
    are safe.  Requires a connected graph.
    """

    def __init__(self, G: MultiGraph, ground: int = 0):
        if not G.is_connected():
            raise GraphDisconnected("Laplacian system needs a connected graph")
        self.n = G.n
        self.ground = ground
        A = G.adjacency_matrix()
        self.L = np.diag(G.degrees.astype(np.float64)) - A
        keep = [v for v in range(G.n) if v != ground]
        self._keep = np.array(keep, dtype=np.int64)
        if G.n > 1:
            reduced = self.L[np.ix_(keep, keep)]
            self._factor = scipy.linalg.cho_factor(reduced, lower=True, check_finite=False)
        else:
            self._factor = None

    def solve_grounded(self, b: np.ndarray) -> np.ndarray:
        """Solve L x = b with x[ground] = 0; b must sum to zero."""
        x = np.zeros(self.n)
        if self._factor is not None:
            x[self._keep] = scipy.linalg.cho_solve(
                self._factor, b[self._keep], check_finite=False
            )
        return x

    def resistance(self, u: int, v: int) -> float:
        if u == v:
            raise SameVertex(f"u = v = {u}")
        b = np.zeros(self.n)
        b[u] += 1.0
        b[v] -= 1.0
        x = self.solve_grounded(b)
        return float(x[u] - x[v])


def effective_resistance(G: MultiGraph, u: int, v: int) -> float:
    """R_eff(u <-> v); +inf for vertices in different components."""
    if u == v:
        raise SameVertex(f"u = v = {u}")
    if not (0 <= u < G.n and 0 <= v < G.n):
        raise ParameterOutOfRange(f"vertices ({u},{v}) outside 0..{G.n - 1}")
    labels = G.component_labels()
    if labels[u] != labels[v]:
        return float("inf")
    if G.is_connected():
        return LaplacianSystem(G, ground=v).resistance(u, v)
    comp = np.flatnonzero(labels == labels[u])
    sub, index = G.induced_subgraph(comp)
    return LaplacianSystem(sub, ground=index[v]).resistance(index[u], index[v])


def edge_ust_probability(G: MultiGraph, e) -> float:
    """P(e in UST) = R_eff across the edge's endpoints (Kirchhoff)."""
    x, y = int(e[0]), int(e[1])
    if G.multiplicity(x, y) == 0:
        raise EdgeNotInGraph(f"({x},{y})")
    if not G.is_connected():
        raise GraphDisconnected("UST undefined on a disconnected graph")
    return effective_resistance(G, x, y)


def log_spanning_tree_count(G: MultiGraph) -> float:
    """log t(G) via the log-determinant of a principal Laplacian minor."""
    if not G.is_connected():
        raise GraphDisconnected("spanning trees exist only in connected graphs")
    if G.n <= 1:
        return 0.0
    A = G.adjacency_matrix()
    L = np.diag(G.degrees.astype(np.float64)) - A
    sign, logdet = np.linalg.slogdet(L[1:, 1:])
    if sign <= 0:
        raise NumericError(f"nonpositive minor determinant (sign {sign})")
    return float(logdet)


def normalized_tree_count_vs_graphon(G: MultiGraph, W) -> tuple[float, float]:
    """Return (t(G)^{1/n} / n, exp(sum_i mu_i log d_i)); comparison left to caller."""
    log_t = log_spanning_tree_count(G)
    n = G.n
    lhs = math.exp(log_t / n - math.log(n))
    d = W.block_degrees
    if float(d.min()) <= 0.0:
        raise DegenerateGraphon("graphon has a zero-degree block")
    rhs = math.exp(float(np.dot(W.mu, np.log(d))))
    return lhs, rhs


def kostochka_upper_check(G: MultiGraph) -> bool:
    """t(G) <= prod_i d_i / (n - 1), evaluated in log space."""
    if not G.is_simple:
        raise NotSimple("bound stated for simple graphs")
    if not G.is_connected():
        raise GraphDisconnected("bound stated for connected graphs")
    deg = G.degrees
    if int(deg.min()) <= 1:
        raise ParameterOutOfRange("bound needs minimum degree > 1")
    log_t = log_spanning_tree_count(G)
    rhs = float(np.log(deg.astype(np.float64)).sum()) - math.log(G.n - 1)
    return log_t <= rhs + 1e-9
