"""Exact dense subgraph decomposition by max-flow, plus the DSC-Flow clusterers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import Clustering, Graph, clustering_from_sets, connected_components, induced_subgraph
from .maxflow import FlowNetwork, max_flow, maximal_source_side


@dataclass
class DecompositionLayer:
    members: list[int]  # internal ids
    level: Fraction
    index: int


@dataclass
class VertexValueVector:
    """Per-node values, indexed by internal id.  ``exact`` values are Fractions."""

    values: list
    exact: bool

    def as_floats(self) -> list[float]:
        return [float(v) for v in self.values]


def _objective(g: Graph, s: Sequence[int], bonus: Sequence[int]) -> Fraction:
    inside = set(s)
    e = sum(1 for u, v in g.edges if u in inside and v in inside)
    return Fraction(e + sum(bonus[v] for v in s), len(s))


class _Reduction:
    """Goldberg-style cut network for ``max_S  N(S) - g|S|`` with ``N(S) = |E(S)| + bonus(S)``.

    For ``g = p/q`` the min s-t cut equals ``n*q*M - 2*max_S(q*N(S) - p*|S|)``
    where ``M = max_v(deg(v) + 2*bonus(v))``; the empty set gives the bound
    ``n*q*M``.  Node ``n`` is the source and ``n + 1`` the sink.
    """

    def __init__(self, g: Graph, bonus: Sequence[int]):
        self.g = g
        self.n = g.n
        self.weight = [g.degree(v) + 2 * bonus[v] for v in range(g.n)]
        self.big = max(self.weight)

    def probe(self, guess: Fraction, maximal: bool = False) -> tuple[bool, list[int]]:
        """Whether some S has objective > guess; returns a source side of the min cut."""
        p, q = guess.numerator, guess.denominator
        n, s, t = self.n, self.n, self.n + 1
        net = FlowNetwork(n + 2)
        qM = q * self.big
        for v in range(n):
            net.add_arc(s, v, qM)
            net.add_arc(v, t, qM + 2 * p - q * self.weight[v])
        for u, v in self.g.edges:
            net.add_arc(u, v, q, q)
        res = max_flow(net, s, t)
        better = res.max_flow_value < n * qM
        if maximal:
            return better, sorted(maximal_source_side(net, s, t))
        return better, res.source_side


def densest_subgraph(g: Graph, bonus: Sequence[int] | None = None) -> tuple[list[int], Fraction]:
    """Maximal set maximising ``(|E(S)| + sum(bonus[S])) / |S|`` and the optimal value.

    Binary search over the guessed density; a successful probe also lifts
    the lower bound to the density of the set it found.  Two distinct
    achievable values differ by at least ``1/(n(n-1))``, so once the bracket
    is narrower the lower bound is the optimum, and one last cut at that
    value taken on the maximal side gives the unique maximal optimiser.
    """
    n = g.n
    if bonus is None:
        bonus = [0] * n
    if len(bonus) != n:
        raise ValueError("bonus must have one entry per node")
    if any(b < 0 for b in bonus):
        raise ValueError("bonus values must be non-negative")
    if g.m == 0 and not any(bonus):
        raise ValueError("density is undefined: no edges and zero bonus")
    if n == 1:
        return [0], Fraction(bonus[0])

    red = _Reduction(g, bonus)
    lo = Fraction(g.m + sum(bonus), n)
    hi = max(Fraction(g.degree(v), 2) + bonus[v] for v in range(n))
    gap = Fraction(1, n * (n - 1))
    while hi - lo >= gap:
        mid = (lo + hi) / 2
        better, side = red.probe(mid)
        if better:
            lo = _objective(g, side, bonus)
        else:
            hi = mid
    better, side = red.probe(lo, maximal=True)
    assert not better and side, "binary search bracket is inconsistent"
    value = _objective(g, side, bonus)
    assert value == lo
    return side, lo


def dense_decomposition(g: Graph) -> tuple[list[DecompositionLayer], VertexValueVector]:
    """Layers S_1, S_2, ... each maximising (|E(S)| + |E(S, U)|)/|S| over the rest.

    ``U`` is the union of earlier layers.  Nodes left with no edges and no
    edge into ``U`` form a final layer at level 0.
    """
    remaining = list(range(g.n))
    taken = [False] * g.n
    layers: list[DecompositionLayer] = []
    values: list[Fraction] = [Fraction(0)] * g.n
    while remaining:
        bonus = [sum(1 for w in g.adj[v] if taken[w]) for v in remaining]
        sub = induced_subgraph(g, remaining)
        if sub.m == 0 and not any(bonus):
            members = list(remaining)
            level = Fraction(0)
        else:
            side, level = densest_subgraph(sub, bonus)
            members = [remaining[i] for i in side]
        layers.append(DecompositionLayer(sorted(members), level, len(layers) + 1))
        for v in members:
            taken[v] = True
            values[v] = level
        remaining = [v for v in remaining if not taken[v]]
    return layers, VertexValueVector(values, exact=True)


def group_by_value(g: Graph, keys: Sequence) -> list[list[int]]:
    """Connected components of each group of nodes sharing a key."""
    groups: dict = {}
    for v, k in enumerate(keys):
        groups.setdefault(k, []).append(v)
    out = []
    for members in groups.values():
        out.extend(connected_components(g, members))
    return sorted(out)


def dsc_flow(g: Graph) -> tuple[Clustering, VertexValueVector]:
    """DSC-Flow clustering together with the exact vertex values it was built from."""
    _, values = dense_decomposition(g)
    return clustering_from_sets(g, group_by_value(g, values.values)), values


def dsc_flow_cluster(g: Graph) -> Clustering:
    """DSC-Flow: nodes with equal exact vertex values, split into connected components."""
    return dsc_flow(g)[0]


def dsc_flow_iter_cluster(g: Graph) -> tuple[Clustering, VertexValueVector]:
    """DSC-Flow-Iter: peel off the maximal densest subgraph of what is left, repeatedly.

    Each round treats the remaining graph as a standalone network (no credit
    for edges into removed parts).  Nodes that end up with no remaining
    edges are singletons with value 0.
    """
    alive = [g.degree(v) > 0 for v in range(g.n)]
    values: list[Fraction] = [Fraction(0)] * g.n
    clusters: list[list[int]] = []
    while True:
        remaining = [v for v in range(g.n) if alive[v]]
        if not remaining:
            break
        sub = induced_subgraph(g, remaining)
        side, density = densest_subgraph(sub)
        members = [remaining[i] for i in side]
        clusters.extend(connected_components(g, members))
        for v in members:
            alive[v] = False
            values[v] = density
        # nodes isolated by the removal leave as singletons
        for v in remaining:
            if alive[v] and not any(alive[w] for w in g.adj[v]):
                alive[v] = False
    return clustering_from_sets(g, clusters), VertexValueVector(values, exact=True)
