"""Leiden community detection for modularity and the Constant Potts Model.

Follows Traag, Waltman & van Eck (2019): fast local moving, randomised
refinement inside each community, aggregation on the refined partition,
repeated until local moving can no longer change anything.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Literal

from .graph import Clustering, Graph, clustering_from_sets, connected_components, internal_sets

_EPS = 1e-12


@dataclass(frozen=True)
class ObjectiveSpec:
    kind: Literal["modularity", "cpm"] = "cpm"
    resolution: float = 0.01

    def __post_init__(self):
        if self.kind not in ("modularity", "cpm"):
            raise ValueError(f"unknown objective {self.kind!r}")
        if self.kind == "cpm" and self.resolution <= 0:
            raise ValueError("CPM resolution must be positive")

    @classmethod
    def modularity(cls) -> "ObjectiveSpec":
        return cls("modularity", 1.0)

    @classmethod
    def cpm(cls, resolution: float = 0.01) -> "ObjectiveSpec":
        return cls("cpm", resolution)


class _Level:
    """Weighted graph at one aggregation level.

    ``size`` is what the penalty term is charged on: node counts for CPM,
    strengths for modularity.
    """

    def __init__(self, nbrs: list[dict[int, float]], self_w: list[float], size: list[float]):
        self.nbrs = nbrs
        self.self_w = self_w
        self.size = size

    @property
    def n(self) -> int:
        return len(self.nbrs)


def _base_level(g: Graph, obj: ObjectiveSpec) -> tuple[_Level, float]:
    nbrs = [dict(d) for d in g.weight_map()]
    if obj.kind == "cpm":
        size = [1.0] * g.n
        gamma = obj.resolution
    else:
        size = [sum(d.values()) for d in nbrs]
        total = sum(size)
        gamma = obj.resolution / total if total > 0 else 0.0
    return _Level(nbrs, [0.0] * g.n, size), gamma


def _move_nodes_fast(lv: _Level, part: list[int], gamma: float, rng: random.Random) -> bool:
    n = lv.n
    tot = [0.0] * (n + 1)
    count = [0] * (n + 1)
    for v in range(n):
        tot[part[v]] += lv.size[v]
        count[part[v]] += 1
    empty = [c for c in range(n + 1) if count[c] == 0]
    order = list(range(n))
    rng.shuffle(order)
    queue = list(order)
    head = 0
    queued = [True] * n
    moved = False
    while head < len(queue):
        v = queue[head]
        head += 1
        queued[v] = False
        a = part[v]
        sv = lv.size[v]
        wts: dict[int, float] = {}
        for u, w in lv.nbrs[v].items():
            c = part[u]
            wts[c] = wts.get(c, 0.0) + w
        tot[a] -= sv
        count[a] -= 1
        best = a
        best_gain = wts.get(a, 0.0) - gamma * sv * tot[a]
        for c, w in wts.items():
            if c == a:
                continue
            gain = w - gamma * sv * tot[c]
            if gain > best_gain + _EPS:
                best, best_gain = c, gain
        if count[a] > 0 and best_gain < -_EPS:
            # an empty community is worth 0
            while count[empty[-1]] > 0:
                empty.pop()
            best, best_gain = empty[-1], 0.0
        if count[a] == 0:
            empty.append(a)
        tot[best] += sv
        count[best] += 1
        part[v] = best
        if best != a:
            moved = True
            for u in lv.nbrs[v]:
                if not queued[u] and part[u] != best:
                    queued[u] = True
                    queue.append(u)
    return moved


def _refine(
    lv: _Level, part: list[int], gamma: float, rng: random.Random, theta: float = 0.01
) -> list[int]:
    n = lv.n
    ref = list(range(n))
    r_tot = list(lv.size)
    r_count = [1] * n
    s_tot: dict[int, float] = {}
    for v in range(n):
        s_tot[part[v]] = s_tot.get(part[v], 0.0) + lv.size[v]
    # weight from each refined community to the rest of its community
    ext = [sum(w for u, w in lv.nbrs[v].items() if part[u] == part[v]) for v in range(n)]
    order = list(range(n))
    rng.shuffle(order)
    for v in order:
        c0 = ref[v]
        if r_count[c0] != 1:
            continue
        sv = lv.size[v]
        total = s_tot[part[v]]
        if ext[c0] < gamma * sv * (total - sv) - _EPS:
            continue
        wts: dict[int, float] = {}
        for u, w in lv.nbrs[v].items():
            if part[u] == part[v] and ref[u] != c0:
                wts[ref[u]] = wts.get(ref[u], 0.0) + w
        options = [(c0, 0.0)]
        for c, w in wts.items():
            if ext[c] < gamma * r_tot[c] * (total - r_tot[c]) - _EPS:
                continue
            gain = w - gamma * sv * r_tot[c]
            if gain >= -_EPS:
                options.append((c, gain))
        if len(options) == 1:
            continue
        top = max(g for _, g in options)
        weights = [math.exp((g - top) / theta) for _, g in options]
        pick = rng.random() * sum(weights)
        chosen = options[-1][0]
        for (c, _), wt in zip(options, weights):
            pick -= wt
            if pick <= 0:
                chosen = c
                break
        if chosen == c0:
            continue
        ext[chosen] = ext[chosen] + ext[c0] - 2.0 * wts[chosen]
        r_tot[chosen] += sv
        r_count[chosen] += 1
        r_count[c0] = 0
        ref[v] = chosen
    return ref


def _aggregate(lv: _Level, by: list[int]) -> tuple[_Level, list[int]]:
    """Collapse nodes sharing a label of ``by``; returns the new level and node -> new node map."""
    relabel: dict[int, int] = {}
    mapping = [relabel.setdefault(c, len(relabel)) for c in by]
    k = len(relabel)
    nbrs: list[dict[int, float]] = [{} for _ in range(k)]
    self_w = [0.0] * k
    size = [0.0] * k
    for v in range(lv.n):
        a = mapping[v]
        size[a] += lv.size[v]
        self_w[a] += lv.self_w[v]
        for u, w in lv.nbrs[v].items():
            b = mapping[u]
            if a == b:
                if v < u:
                    self_w[a] += w
            else:
                nbrs[a][b] = nbrs[a].get(b, 0.0) + w
    return _Level(nbrs, self_w, size), mapping


def _leiden_pass(lv0: _Level, part0: list[int], gamma: float, rng: random.Random) -> list[int]:
    lv = lv0
    part = list(part0)
    node_of = list(range(lv0.n))
    while True:
        _move_nodes_fast(lv, part, gamma, rng)
        if len(set(part)) == lv.n:
            break
        ref = _refine(lv, part, gamma, rng)
        by = ref if len(set(ref)) < lv.n else part
        new_lv, mapping = _aggregate(lv, by)
        new_part = [0] * new_lv.n
        for v in range(lv.n):
            new_part[mapping[v]] = part[v]
        # compact community labels so they index arrays of size n + 1
        relabel: dict[int, int] = {}
        part = [relabel.setdefault(c, len(relabel)) for c in new_part]
        node_of = [mapping[x] for x in node_of]
        lv = new_lv
    return [part[node_of[v]] for v in range(lv0.n)]


def leiden_cluster(
    g: Graph,
    obj: ObjectiveSpec = ObjectiveSpec(),
    seed: int = 0,
    iterations: int = 10,
    initial: Clustering | None = None,
) -> Clustering:
    """Leiden clustering of ``g`` (weights honoured when present).

    Runs up to ``iterations`` full Leiden passes, each starting from the
    previous result, and stops early once a pass leaves the partition
    unchanged.  Output clusters are connected.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if g.n == 0:
        return Clustering({})
    lv, gamma = _base_level(g, obj)
    if g.m == 0 or gamma == 0.0:
        return clustering_from_sets(g, [])
    rng = random.Random(seed)
    if initial is None:
        part = list(range(g.n))
    else:
        part = [0] * g.n
        for k, members in enumerate(internal_sets(g, initial)):
            for v in members:
                part[v] = k
    for _ in range(iterations):
        new = _leiden_pass(lv, part, gamma, rng)
        same = _canon(new) == _canon(part)
        part = new
        if same:
            break
    groups: dict[int, list[int]] = {}
    for v, c in enumerate(part):
        groups.setdefault(c, []).append(v)
    # splitting a disconnected community never lowers either objective
    comps = []
    for members in groups.values():
        comps.extend(connected_components(g, members))
    return clustering_from_sets(g, sorted(comps))


def _canon(part: list[int]) -> list[int]:
    relabel: dict[int, int] = {}
    return [relabel.setdefault(c, len(relabel)) for c in part]


def quality(g: Graph, c: Clustering, obj: ObjectiveSpec) -> float:
    """CPM: sum over clusters of ``w_in - gamma * C(n_c, 2)``; modularity in its weighted form."""
    sets = internal_sets(g, c)
    label = [0] * g.n
    for k, members in enumerate(sets):
        for v in members:
            label[v] = k
    w_in = [0.0] * len(sets)
    for k, (u, v) in enumerate(g.edges):
        if label[u] == label[v]:
            w_in[label[u]] += g.edge_weight(k)
    if obj.kind == "cpm":
        return sum(w - obj.resolution * len(s) * (len(s) - 1) / 2 for w, s in zip(w_in, sets))
    total = sum(g.edge_weight(k) for k in range(g.m))
    if total == 0:
        return 0.0
    strength = [0.0] * len(sets)
    for k, (u, v) in enumerate(g.edges):
        w = g.edge_weight(k)
        strength[label[u]] += w
        strength[label[v]] += w
    return sum(
        w / total - obj.resolution * (k / (2 * total)) ** 2 for w, k in zip(w_in, strength)
    )
