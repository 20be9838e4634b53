"""Undirected simple graphs, clusterings, TSV I/O and k-core machinery."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Iterable, Sequence

log = logging.getLogger(__name__)


class EdgelistParseError(ValueError):
    """Raised when an edgelist or clustering file has a malformed line."""


class Graph:
    """Immutable undirected simple graph.

    Nodes are stored under internal ids ``0..n-1``; ``ids[i]`` is the external
    id of internal node ``i``.  Subgraphs keep the external ids of the graph
    they were cut from, so ids compose through any chain of
    :func:`induced_subgraph` calls.
    """

    __slots__ = ("ids", "index", "edges", "adj", "weights", "_wadj", "self_loops_dropped")

    def __init__(
        self,
        ids: Sequence[int],
        edges: Iterable[tuple[int, int]],
        weights: Sequence[float] | None = None,
    ):
        self.ids = list(ids)
        self.index = {x: i for i, x in enumerate(self.ids)}
        if len(self.index) != len(self.ids):
            raise ValueError("duplicate node ids")
        n = len(self.ids)
        seen: dict[tuple[int, int], int] = {}
        wsum: list[float] = []
        dropped = 0
        wl = list(weights) if weights is not None else None
        for k, (u, v) in enumerate(edges):
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} nodes")
            if u == v:
                dropped += 1
                continue
            key = (u, v) if u < v else (v, u)
            if key in seen:
                # parallel edges collapse; the first weight wins
                continue
            seen[key] = len(wsum)
            wsum.append(float(wl[k]) if wl is not None else 1.0)
        order = sorted(seen)
        self.edges: list[tuple[int, int]] = order
        self.weights: list[float] | None = (
            [wsum[seen[e]] for e in order] if wl is not None else None
        )
        if self.weights is not None and any(w < 0 for w in self.weights):
            raise ValueError("edge weights must be non-negative")
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in order:
            adj[u].append(v)
            adj[v].append(u)
        for a in adj:
            a.sort()
        self.adj = adj
        self._wadj: list[dict[int, float]] | None = None
        self.self_loops_dropped = dropped

    @classmethod
    def from_edges(
        cls,
        pairs: Iterable[tuple[int, int]],
        weights: Sequence[float] | None = None,
        nodes: Iterable[int] = (),
    ) -> "Graph":
        """Build a graph from external-id pairs; ids are numbered by first appearance.

        ``nodes`` lists extra external ids (possibly isolated) that are numbered
        before any id taken from ``pairs``.
        """
        index: dict[int, int] = {}
        for x in nodes:
            index.setdefault(x, len(index))
        internal = []
        for a, b in pairs:
            u = index.setdefault(a, len(index))
            v = index.setdefault(b, len(index))
            internal.append((u, v))
        return cls(list(index), internal, weights)

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def weight_map(self) -> list[dict[int, float]]:
        """Per-node ``{neighbour: weight}`` maps (all weights 1 when unweighted)."""
        if self._wadj is None:
            wadj: list[dict[int, float]] = [{} for _ in range(self.n)]
            ws = self.weights if self.weights is not None else [1.0] * self.m
            for (u, v), w in zip(self.edges, ws):
                wadj[u][v] = w
                wadj[v][u] = w
            self._wadj = wadj
        return self._wadj

    def edge_weight(self, k: int) -> float:
        return 1.0 if self.weights is None else self.weights[k]

    def external_edges(self) -> list[tuple[int, int]]:
        return [(self.ids[u], self.ids[v]) for u, v in self.edges]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, weighted={self.weighted})"


@dataclass
class Clustering:
    """A partition of external node ids into labelled clusters."""

    assignment: dict[int, Hashable] = field(default_factory=dict)

    @classmethod
    def from_clusters(cls, clusters: Iterable[Iterable[int]]) -> "Clustering":
        assignment: dict[int, Hashable] = {}
        for label, members in enumerate(clusters):
            for x in members:
                if x in assignment:
                    raise ValueError(f"node {x} appears in two clusters")
                assignment[x] = label
        return cls(assignment)

    @classmethod
    def singletons(cls, nodes: Iterable[int]) -> "Clustering":
        return cls({x: i for i, x in enumerate(nodes)})

    def clusters(self) -> dict[Hashable, list[int]]:
        out: dict[Hashable, list[int]] = {}
        for x, c in self.assignment.items():
            out.setdefault(c, []).append(x)
        return out

    def members(self) -> list[list[int]]:
        """Clusters as sorted member lists, ordered by smallest member."""
        return sorted(sorted(c) for c in self.clusters().values())

    def sizes(self) -> dict[Hashable, int]:
        out: dict[Hashable, int] = {}
        for c in self.assignment.values():
            out[c] = out.get(c, 0) + 1
        return out

    def nodes(self) -> set[int]:
        return set(self.assignment)

    def __len__(self) -> int:
        return len(self.assignment)

    def restricted_to(self, nodes: Iterable[int]) -> "Clustering":
        """Clustering over exactly ``nodes``; nodes not assigned become singletons."""
        out: dict[int, Hashable] = {}
        for x in nodes:
            if x in self.assignment:
                out[x] = ("c", self.assignment[x])
            else:
                out[x] = ("s", x)
        return Clustering(out)

    def canonical(self, order: Sequence[int] | None = None) -> "Clustering":
        """Relabel clusters ``0..k-1`` by first appearance along ``order``."""
        if order is None:
            order = sorted(self.assignment)
        relabel: dict[Hashable, int] = {}
        out = {}
        for x in order:
            c = self.assignment[x]
            out[x] = relabel.setdefault(c, len(relabel))
        return Clustering(out)

    def same_partition(self, other: "Clustering") -> bool:
        return self.nodes() == other.nodes() and self.members() == other.members()


def clustering_from_sets(g: Graph, sets: Iterable[Iterable[int]]) -> Clustering:
    """Clustering over all of ``g`` from internal-id sets; uncovered nodes become singletons."""
    label = [-1] * g.n
    k = 0
    for s in sets:
        for v in s:
            label[v] = k
        k += 1
    for v in range(g.n):
        if label[v] < 0:
            label[v] = k
            k += 1
    return Clustering({g.ids[v]: label[v] for v in range(g.n)}).canonical(g.ids)


def internal_sets(g: Graph, c: Clustering) -> list[list[int]]:
    """Clusters of ``c`` as internal-id lists of ``g``, ordered by smallest member."""
    groups: dict[Hashable, list[int]] = {}
    for v, x in enumerate(g.ids):
        if x not in c.assignment:
            raise KeyError(f"node {x} missing from clustering")
        groups.setdefault(c.assignment[x], []).append(v)
    return sorted(groups.values())


# --------------------------------------------------------------------------- I/O


def _parse_int(tok: str, path, lineno: int) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise EdgelistParseError(f"{path}:{lineno}: expected integer node id, got {tok!r}") from None
    if value < 0:
        raise EdgelistParseError(f"{path}:{lineno}: negative node id {value}")
    return value


def load_edgelist(path: str | Path, weighted: bool = False) -> Graph:
    """Read a ``src<TAB>dst[<TAB>weight]`` edgelist.

    Duplicate edges are collapsed and self-loops dropped; the number of dropped
    self-loops is logged and kept on ``Graph.self_loops_dropped``.
    """
    pairs = []
    weights = [] if weighted else None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            fields = line.split("\t") if "\t" in line else line.split()
            # unweighted reads tolerate a weight column (merged-graph output)
            if len(fields) not in ((3,) if weighted else (2, 3)):
                raise EdgelistParseError(
                    f"{path}:{lineno}: expected {3 if weighted else 2} tab-separated fields, "
                    f"got {len(fields)}"
                )
            u = _parse_int(fields[0], path, lineno)
            v = _parse_int(fields[1], path, lineno)
            pairs.append((u, v))
            if weights is not None:
                try:
                    weights.append(float(fields[2]))
                except ValueError:
                    raise EdgelistParseError(f"{path}:{lineno}: bad weight {fields[2]!r}") from None
    g = Graph.from_edges(pairs, weights)
    if g.self_loops_dropped:
        log.warning("%s: dropped %d self-loop(s)", path, g.self_loops_dropped)
    return g


def format_weight(w: float) -> str:
    return f"{w:.6g}"


def write_edgelist(g: Graph, path: str | Path, weighted: bool | None = None) -> None:
    if weighted is None:
        weighted = g.weighted
    with open(path, "w") as fh:
        for k, (u, v) in enumerate(g.edges):
            if weighted:
                fh.write(f"{g.ids[u]}\t{g.ids[v]}\t{format_weight(g.edge_weight(k))}\n")
            else:
                fh.write(f"{g.ids[u]}\t{g.ids[v]}\n")


def read_clustering(path: str | Path) -> Clustering:
    """Read a ``node<TAB>cluster`` file.  Cluster labels are kept as strings."""
    assignment: dict[int, Hashable] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            fields = line.split("\t") if "\t" in line else line.split()
            if len(fields) != 2:
                raise EdgelistParseError(f"{path}:{lineno}: expected 2 fields, got {len(fields)}")
            node = _parse_int(fields[0], path, lineno)
            if node in assignment:
                raise EdgelistParseError(f"{path}:{lineno}: node {node} assigned twice")
            assignment[node] = fields[1]
    return Clustering(assignment)


def write_clustering(c: Clustering, path: str | Path, order: Sequence[int] | None = None) -> None:
    """Write every node (singletons included) with canonical labels ``0..k-1``."""
    if order is None:
        order = sorted(c.assignment)
    canon = c.canonical(order)
    with open(path, "w") as fh:
        for x in order:
            fh.write(f"{x}\t{canon.assignment[x]}\n")


# ----------------------------------------------------------------- structure


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    """Subgraph on internal ids ``s`` (kept in increasing order) with the edges E(S)."""
    nodes = sorted(set(s))
    if not nodes:
        raise ValueError("induced_subgraph needs a non-empty node set")
    if nodes[0] < 0 or nodes[-1] >= g.n:
        raise ValueError("node set not contained in graph")
    local = {v: i for i, v in enumerate(nodes)}
    edges = []
    weights = [] if g.weighted else None
    for k, (u, v) in enumerate(g.edges):
        if u in local and v in local:
            edges.append((local[u], local[v]))
            if weights is not None:
                weights.append(g.weights[k])
    return Graph([g.ids[v] for v in nodes], edges, weights)


def connected_components(g: Graph, nodes: Iterable[int] | None = None) -> list[list[int]]:
    """Components as sorted internal-id lists, ordered by smallest member.

    When ``nodes`` is given, components of the subgraph induced by ``nodes``
    are returned without materialising that subgraph.
    """
    if nodes is None:
        allowed = None
        order = range(g.n)
    else:
        allowed = set(nodes)
        order = sorted(allowed)
    seen = set()
    comps = []
    for r in order:
        if r in seen:
            continue
        seen.add(r)
        comp = [r]
        queue = deque([r])
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if w not in seen and (allowed is None or w in allowed):
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comp.sort()
        comps.append(comp)
    return comps


def core_numbers(g: Graph, nodes: Iterable[int] | None = None) -> dict[int, int]:
    """Core number of every node (bucket peeling), optionally within a node subset."""
    alive = set(range(g.n)) if nodes is None else set(nodes)
    deg = {v: sum(1 for w in g.adj[v] if w in alive) for v in alive}
    if not deg:
        return {}
    maxdeg = max(deg.values())
    buckets: list[set[int]] = [set() for _ in range(maxdeg + 1)]
    for v, d in deg.items():
        buckets[d].add(v)
    core: dict[int, int] = {}
    k = 0
    for _ in range(len(deg)):
        d = 0
        while not buckets[d]:
            d += 1
        v = min(buckets[d])
        buckets[d].remove(v)
        k = max(k, d)
        core[v] = k
        for w in g.adj[v]:
            if w in alive and w not in core:
                dw = deg[w]
                buckets[dw].remove(w)
                deg[w] = dw - 1
                buckets[dw - 1].add(w)
    return core


def k_core(g: Graph, k: int, nodes: Iterable[int] | None = None) -> set[int]:
    """Largest node set whose induced subgraph has minimum degree >= k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    alive = set(range(g.n)) if nodes is None else set(nodes)
    deg = {v: sum(1 for w in g.adj[v] if w in alive) for v in alive}
    stack = [v for v, d in deg.items() if d < k]
    removed = set(stack)
    while stack:
        v = stack.pop()
        for w in g.adj[v]:
            if w in alive and w not in removed:
                deg[w] -= 1
                if deg[w] < k:
                    removed.add(w)
                    stack.append(w)
    return alive - removed


def ikc_cluster(g: Graph, k_min: int = 1) -> Clustering:
    """Iterative k-core clustering.

    Repeatedly takes the k-core for the largest k that still has one, turns
    its connected components into clusters and removes it.  Stops when the
    best available k drops below ``k_min`` (or reaches 0); whatever is left
    becomes singletons.
    """
    if k_min < 0:
        raise ValueError("k_min must be non-negative")
    remaining = set(range(g.n))
    clusters = []
    while remaining:
        core = core_numbers(g, remaining)
        kmax = max(core.values())
        if kmax == 0 or kmax < k_min:
            break
        members = {v for v, c in core.items() if c >= kmax}
        clusters.extend(connected_components(g, members))
        remaining -= members
    return clustering_from_sets(g, clusters)
