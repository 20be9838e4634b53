"""Approximate dense decomposition with FISTA, fractional peeling, and the DSC-FISTA clusterers.

The convex program is the load-balancing quadratic program: every edge
splits one unit of load between its endpoints, ``x[e]`` going to the first
endpoint and ``1 - x[e]`` to the second, and we minimise the sum of squared
node loads.  Its optimal loads are the exact decomposition levels.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .flow import VertexValueVector, group_by_value
from .graph import Clustering, Graph, clustering_from_sets, connected_components, induced_subgraph


@dataclass
class EdgeLoadState:
    """Fractional edge orientation; ``share[e]`` is the part of edge ``e`` given to ``g.edges[e][0]``."""

    src: np.ndarray
    dst: np.ndarray
    share: np.ndarray
    n: int

    @property
    def loads(self) -> np.ndarray:
        return np.bincount(self.src, self.share, minlength=self.n) + np.bincount(
            self.dst, 1.0 - self.share, minlength=self.n
        )

    def objective(self) -> float:
        b = self.loads
        return float(b @ b)


def _edge_arrays(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    if g.m == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    e = np.asarray(g.edges, dtype=np.int64)
    return e[:, 0], e[:, 1]


def fista_state(g: Graph, n_iters: int, trace: list | None = None) -> EdgeLoadState:
    """Run ``n_iters`` FISTA steps from the even split; optionally record the objective per step.

    Each edge carries the pair ``(x_uv, x_vu)`` on the simplex ``x_uv + x_vu = 1``.
    The gradient of ``sum(b**2)`` with respect to ``x_uv`` is ``2*b_u``, the
    step is ``1/(2*max_degree)``, and the pair is projected back onto the
    simplex after every step.  The iterate is only replaced when the
    objective does not go up (Beck and Teboulle's monotone FISTA), so the
    recorded objective never increases.
    """
    if n_iters < 1:
        raise ValueError("n_iters must be >= 1")
    src, dst = _edge_arrays(g)
    x = np.full(g.m, 0.5)
    state = EdgeLoadState(src, dst, x, g.n)
    if g.m == 0:
        return state
    step = 1.0 / (2.0 * max(g.degrees()))

    def loads(z):
        return np.bincount(src, z, minlength=g.n) + np.bincount(dst, 1.0 - z, minlength=g.n)

    y = x.copy()
    t = 1.0
    bx = loads(x)
    fx = float(bx @ bx)
    for _ in range(n_iters):
        b = loads(y)
        a = y - step * 2.0 * b[src]
        c = (1.0 - y) - step * 2.0 * b[dst]
        # Euclidean projection of (a, c) onto {p + q = 1, p, q >= 0}
        z = np.clip((a - c + 1.0) / 2.0, 0.0, 1.0)
        bz = loads(z)
        fz = float(bz @ bz)
        t_new = (1.0 + math.sqrt(1.0 + 4.0 * t * t)) / 2.0
        # monotone variant: never accept an objective increase
        x_new = z if fz <= fx else x
        y = x_new + (t / t_new) * (z - x_new) + ((t - 1.0) / t_new) * (x_new - x)
        if fz <= fx:
            fx = fz
        x, t = x_new, t_new
        if trace is not None:
            trace.append(fx)
    state.share = x
    return state


def fista_solve(g: Graph, n_iters: int = 200) -> VertexValueVector:
    """Approximate vertex values (node loads) after ``n_iters`` FISTA steps."""
    return VertexValueVector(list(fista_state(g, n_iters).loads), exact=False)


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def dsc_fista_int_cluster(g: Graph, n_iters: int = 200) -> tuple[Clustering, VertexValueVector]:
    """DSC-FISTA(int): group nodes whose loads round to the same integer, then split by components."""
    values = fista_solve(g, n_iters)
    keys = [round_half_up(v) for v in values.values]
    return clustering_from_sets(g, group_by_value(g, keys)), values


def fractional_peel(g: Graph, state: EdgeLoadState) -> tuple[list[int], float]:
    """Densest suffix found by repeatedly removing the minimum-load node.

    A removed node's share of each remaining incident edge is handed to the
    neighbour on the other end.  Ties on load go to the smaller internal id;
    ties on density keep the larger (earlier) set.
    """
    if g.m == 0:
        raise ValueError("fractional peeling needs at least one edge")
    load = [float(v) for v in state.loads]
    # mine[u][w]: part of edge {u, w} currently assigned to u
    mine: list[dict[int, float]] = [{} for _ in range(g.n)]
    for k, (u, v) in enumerate(g.edges):
        mine[u][v] = float(state.share[k])
        mine[v][u] = 1.0 - float(state.share[k])
    alive = [True] * g.n
    heap = [(load[v], v) for v in range(g.n)]
    heapq.heapify(heap)
    edges_left, size = g.m, g.n
    best_density = edges_left / size
    best_removed = 0
    order: list[int] = []
    while size > 1:
        lu, u = heapq.heappop(heap)
        if not alive[u] or lu != load[u]:
            continue
        alive[u] = False
        order.append(u)
        for w in g.adj[u]:
            if alive[w]:
                load[w] += mine[u][w]
                heapq.heappush(heap, (load[w], w))
                edges_left -= 1
        size -= 1
        density = edges_left / size
        if density > best_density:
            best_density = density
            best_removed = len(order)
    removed = set(order[:best_removed])
    return [v for v in range(g.n) if v not in removed], best_density


def dsc_fista_iter_cluster(g: Graph, n_iters: int = 200) -> tuple[Clustering, VertexValueVector]:
    """DSC-FISTA-Iter: FISTA (cold start) plus fractional peeling on what is left, repeatedly.

    The value reported for a node is the density of the subgraph it was
    extracted with (0 for singletons).
    """
    alive = [g.degree(v) > 0 for v in range(g.n)]
    values = [0.0] * g.n
    clusters: list[list[int]] = []
    while True:
        remaining = [v for v in range(g.n) if alive[v]]
        if not remaining:
            break
        sub = induced_subgraph(g, remaining)
        state = fista_state(sub, n_iters)
        side, density = fractional_peel(sub, state)
        members = [remaining[i] for i in side]
        clusters.extend(connected_components(g, members))
        for v in members:
            alive[v] = False
            values[v] = density
        for v in remaining:
            if alive[v] and not any(alive[w] for w in g.adj[v]):
                alive[v] = False
    return clustering_from_sets(g, clusters), VertexValueVector(values, exact=False)
