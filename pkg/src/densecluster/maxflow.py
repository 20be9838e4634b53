"""Push-relabel maximum flow and Stoer-Wagner global minimum cut.

Capacities are expected to be integers (callers scale rationals by a common
denominator), so every solve is exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph import Graph, connected_components


@dataclass
class CutResult:
    max_flow_value: int
    source_side: list[int]  # excludes s
    sink_side: list[int]  # excludes t


class FlowNetwork:
    """Directed network stored as paired arcs: arc ``a`` and arc ``a ^ 1`` are residual twins."""

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("a flow network needs at least two nodes")
        self.n = n
        self.head: list[int] = []
        self.capacity: list = []
        self.residual: list = []
        self.adj: list[list[int]] = [[] for _ in range(n)]

    def add_arc(self, u: int, v: int, cap, rev_cap=0) -> int:
        """Add ``u -> v`` with capacity ``cap`` (and ``v -> u`` with ``rev_cap``); returns the arc id."""
        if cap < 0 or rev_cap < 0:
            raise ValueError("capacities must be non-negative")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"arc ({u}, {v}) out of range")
        a = len(self.head)
        self.head += [v, u]
        self.capacity += [cap, rev_cap]
        self.residual += [cap, rev_cap]
        self.adj[u].append(a)
        self.adj[v].append(a + 1)
        return a

    @property
    def num_arcs(self) -> int:
        return len(self.head)

    def tail(self, a: int) -> int:
        return self.head[a ^ 1]

    def flow(self, a: int):
        """Flow carried by arc ``a`` (net flow on the pair, clipped at zero)."""
        return max(self.capacity[a] - self.residual[a], 0)

    def reset(self) -> None:
        self.residual = list(self.capacity)


def _global_relabel(net: FlowNetwork, s: int, t: int, label: list[int]) -> None:
    """Exact distance labels: to t in the residual graph, else n + distance to s."""
    n = net.n
    head, res, adj = net.head, net.residual, net.adj
    for v in range(n):
        label[v] = 2 * n
    for root, base in ((t, 0), (s, n)):
        label[root] = base
        queue = deque([root])
        while queue:
            u = queue.popleft()
            du = label[u] + 1
            for a in adj[u]:
                v = head[a]
                # v -> u is the twin of a
                if res[a ^ 1] > 0 and label[v] == 2 * n and v != s and v != t:
                    label[v] = du
                    queue.append(v)


def max_flow(net: FlowNetwork, s: int, t: int) -> CutResult:
    """Highest-label push-relabel with the gap heuristic and periodic global relabels.

    Returns the flow value with the minimal source side (nodes reachable from
    ``s`` in the residual network).  Use :func:`maximal_source_side` on the
    solved network for the maximal one.
    """
    n = net.n
    if not (0 <= s < n and 0 <= t < n):
        raise ValueError("source or sink out of range")
    if s == t:
        raise ValueError("source and sink must differ")
    net.reset()
    head, res, adj = net.head, net.residual, net.adj
    excess = [0] * n
    label = [0] * n
    current = [0] * n

    for a in adj[s]:
        c = res[a]
        if c > 0:
            v = head[a]
            res[a] = 0
            res[a ^ 1] += c
            excess[v] += c
            excess[s] -= c

    _global_relabel(net, s, t, label)
    buckets: list[list[int]] = [[] for _ in range(2 * n + 1)]
    count = [0] * (2 * n + 1)
    for v in range(n):
        count[label[v]] += 1
    top = 0
    for v in range(n):
        if v != s and v != t and excess[v] > 0 and label[v] < 2 * n:
            buckets[label[v]].append(v)
            top = max(top, label[v])

    relabel_period = max(n, net.num_arcs // 2)
    relabels = 0

    while True:
        while top >= 0 and not buckets[top]:
            top -= 1
        if top < 0:
            break
        u = buckets[top].pop()
        if label[u] != top or excess[u] <= 0:
            continue
        # discharge u
        while excess[u] > 0:
            arcs = adj[u]
            i = current[u]
            if i == len(arcs):
                # relabel
                old = label[u]
                best = 2 * n
                for a in arcs:
                    if res[a] > 0:
                        lv = label[head[a]] + 1
                        if lv < best:
                            best = lv
                count[old] -= 1
                label[u] = best
                count[best] += 1
                current[u] = 0
                relabels += 1
                if old < n and count[old] == 0:
                    # gap: nodes above it can no longer reach t
                    for v in range(n):
                        if old < label[v] < n and v != s:
                            count[label[v]] -= 1
                            label[v] = n + 1
                            count[n + 1] += 1
                            current[v] = 0
                            if excess[v] > 0 and v != t:
                                buckets[n + 1].append(v)
                                top = max(top, n + 1)
                    if label[u] < n + 1:
                        count[label[u]] -= 1
                        label[u] = n + 1
                        count[n + 1] += 1
                if label[u] >= 2 * n:
                    break
                continue
            a = arcs[i]
            v = head[a]
            if res[a] > 0 and label[u] == label[v] + 1:
                d = excess[u] if excess[u] < res[a] else res[a]
                res[a] -= d
                res[a ^ 1] += d
                excess[u] -= d
                if excess[v] == 0 and v != s and v != t:
                    buckets[label[v]].append(v)
                    if label[v] > top:
                        top = label[v]
                excess[v] += d
            else:
                current[u] = i + 1
        if excess[u] > 0 and label[u] < 2 * n:
            buckets[label[u]].append(u)
            top = max(top, label[u])
        if relabels >= relabel_period:
            relabels = 0
            _global_relabel(net, s, t, label)
            count = [0] * (2 * n + 1)
            for v in range(n):
                count[label[v]] += 1
                current[v] = 0
            buckets = [[] for _ in range(2 * n + 1)]
            for v in range(n):
                if v != s and v != t and excess[v] > 0 and label[v] < 2 * n:
                    buckets[label[v]].append(v)
            top = 2 * n

    reach = _reachable_from(net, s)
    source_side = [v for v in range(n) if reach[v] and v != s]
    sink_side = [v for v in range(n) if not reach[v] and v != t]
    return CutResult(excess[t], source_side, sink_side)


def _reachable_from(net: FlowNetwork, s: int) -> list[bool]:
    seen = [False] * net.n
    seen[s] = True
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for a in net.adj[u]:
            v = net.head[a]
            if not seen[v] and net.residual[a] > 0:
                seen[v] = True
                queue.append(v)
    return seen


def _reaches(net: FlowNetwork, t: int) -> list[bool]:
    seen = [False] * net.n
    seen[t] = True
    queue = deque([t])
    while queue:
        u = queue.popleft()
        for a in net.adj[u]:
            v = net.head[a]
            if not seen[v] and net.residual[a ^ 1] > 0:
                seen[v] = True
                queue.append(v)
    return seen


def maximal_source_side(net: FlowNetwork, s: int, t: int) -> list[int]:
    """Nodes (excluding s) that cannot reach ``t`` in the residual of a solved network."""
    reach_t = _reaches(net, t)
    return [v for v in range(net.n) if not reach_t[v] and v != s]


def solve(net: FlowNetwork, s: int, t: int, maximal: bool = False) -> CutResult:
    """Max flow; with ``maximal=True`` the cut reported is the maximal source-side min cut."""
    res = max_flow(net, s, t)
    if maximal:
        side = set(maximal_source_side(net, s, t))
        res.source_side = sorted(side)
        res.sink_side = [v for v in range(net.n) if v not in side and v != s and v != t]
    return res


def min_cut_global(g: Graph) -> tuple[float, tuple[list[int], list[int]]]:
    """Stoer-Wagner minimum cut of a connected graph (internal ids).

    Ties in the maximum-adjacency ordering go to the smallest index, so the
    witnessing partition is deterministic.  Returns ``(cut, (side, rest))``
    where ``side`` is the merged vertex that was added last in the best phase.
    """
    n = g.n
    if n < 2:
        raise ValueError("global min cut needs at least two nodes")
    if len(connected_components(g)) > 1:
        raise ValueError("min_cut_global requires a connected graph")
    W = np.zeros((n, n))
    for k, (u, v) in enumerate(g.edges):
        w = g.edge_weight(k)
        W[u, v] += w
        W[v, u] += w
    groups = [[v] for v in range(n)]
    active = list(range(n))
    best = np.inf
    best_side: list[int] = []
    while len(active) > 1:
        idx = np.array(active)
        sub = W[np.ix_(idx, idx)]
        k = len(active)
        in_a = np.zeros(k, dtype=bool)
        conn = sub[0].copy()
        in_a[0] = True
        prev, last = 0, 0
        for _ in range(k - 1):
            cand = np.where(in_a, -np.inf, conn)
            nxt = int(np.argmax(cand))
            prev, last = last, nxt
            in_a[nxt] = True
            conn += sub[nxt]
        cut = float(sub[last].sum())
        if cut < best:
            best = cut
            best_side = list(groups[active[last]])
        s_node, t_node = active[prev], active[last]
        W[s_node, :] += W[t_node, :]
        W[:, s_node] += W[:, t_node]
        W[s_node, s_node] = 0.0
        groups[s_node].extend(groups[t_node])
        active.remove(t_node)
    side = sorted(best_side)
    in_side = set(side)
    rest = [v for v in range(n) if v not in in_side]
    return best, (side, rest)
