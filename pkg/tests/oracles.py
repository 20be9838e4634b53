"""Independent brute-force references used by the test-suite.

Nothing here imports the algorithms under test; only the plain Graph
container is shared.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import numpy as np

from densecluster.graph import Graph


def random_graph(seed: int, n_lo: int = 5, n_hi: int = 12, p: float | None = None) -> Graph:
    rng = random.Random(seed)
    n = rng.randint(n_lo, n_hi)
    p = rng.uniform(0.15, 0.9) if p is None else p
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(list(range(n)), edges)


def subset_masks(n: int) -> np.ndarray:
    """(2^n, n) boolean membership matrix; row k is the subset with bitmask k."""
    k = np.arange(1 << n)
    return ((k[:, None] >> np.arange(n)) & 1).astype(bool)


def brute_densest(g: Graph, bonus=None) -> tuple[frozenset, Fraction]:
    """Maximal maximizer of (|E(S)| + bonus(S)) / |S| by enumerating every subset."""
    n = g.n
    bonus = [0] * n if bonus is None else list(bonus)
    mem = subset_masks(n)[1:]
    num = np.zeros(len(mem), dtype=np.int64)
    for u, v in g.edges:
        num += mem[:, u] & mem[:, v]
    num += mem.astype(np.int64) @ np.array(bonus, dtype=np.int64)
    size = mem.sum(axis=1)
    # exact comparison via cross-multiplication against the float argmax
    k0 = int(np.argmax(num / size))
    best = Fraction(int(num[k0]), int(size[k0]))
    ties = np.nonzero(num * best.denominator == size * best.numerator)[0]
    union = frozenset(int(x) for x in np.nonzero(mem[ties].any(axis=0))[0])
    biggest = max(ties, key=lambda k: size[k])
    assert size[biggest] == len(union), "maximal optimizer must be the union of optimizers"
    return union, best


def brute_min_st_cut(n: int, arcs: list[tuple[int, int, int]], s: int, t: int) -> int:
    """Minimum capacity over all 2^(n-2) cuts with s on the source side and t on the other."""
    others = [v for v in range(n) if v not in (s, t)]
    side = np.zeros((1 << len(others), n), dtype=bool)
    side[:, others] = subset_masks(len(others))
    side[:, s] = True
    caps = np.zeros(len(side), dtype=np.int64)
    for u, v, c in arcs:
        caps += c * (side[:, u] & ~side[:, v])
    return int(caps.min())


def brute_global_min_cut(g: Graph) -> float:
    """Minimum crossing weight over every split into two non-empty sides."""
    n = g.n
    # node 0 fixed on the left to skip mirror images; drop the all-left row
    side = np.zeros((1 << (n - 1), n), dtype=bool)
    side[:, 1:] = subset_masks(n - 1)
    side[:, 0] = True
    side = side[:-1]
    cuts = np.zeros(len(side))
    for k, (u, v) in enumerate(g.edges):
        cuts += g.edge_weight(k) * (side[:, u] != side[:, v])
    return float(cuts.min())


def set_partitions(items: list):
    """Every set partition of ``items`` (Bell-number many)."""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1:]
        yield [[head]] + part


def entropy(counts) -> float:
    total = sum(counts)
    return -sum(c / total * math.log(c / total) for c in counts if c)


def mi_from_table(table: list[list[int]]) -> float:
    n = sum(map(sum, table))
    a = [sum(r) for r in table]
    b = [sum(col) for col in zip(*table)]
    out = 0.0
    for i, row in enumerate(table):
        for j, x in enumerate(row):
            if x:
                out += x / n * math.log(n * x / (a[i] * b[j]))
    return out


def _tables_with_margins(a: list[int], b: list[int]):
    """Every non-negative integer matrix with row sums ``a`` and column sums ``b``."""
    if not a:
        if all(x == 0 for x in b):
            yield []
        return
    first, rest = a[0], a[1:]

    def rows(j, remaining, cap):
        if j == len(cap) - 1:
            if remaining <= cap[j]:
                yield [remaining]
            return
        for x in range(min(remaining, cap[j]) + 1):
            for tail in rows(j + 1, remaining - x, cap):
                yield [x] + tail

    for row in rows(0, first, b):
        left = [bj - x for bj, x in zip(b, row)]
        for more in _tables_with_margins(rest, left):
            yield [row] + more


def brute_expected_mi(a: list[int], b: list[int]) -> float:
    """E[MI] over all tables with the given margins, weighted by their permutation-model probability."""
    n = sum(a)
    lf = [math.lgamma(k + 1) for k in range(n + 1)]
    const = sum(lf[x] for x in a) + sum(lf[x] for x in b) - lf[n]
    total_p = 0.0
    out = 0.0
    for table in _tables_with_margins(list(a), list(b)):
        logp = const - sum(lf[x] for row in table for x in row)
        p = math.exp(logp)
        total_p += p
        out += p * mi_from_table(table)
    assert abs(total_p - 1.0) < 1e-9
    return out


def pair_counts(truth: dict, est: dict) -> tuple[int, int, int, int]:
    tp = fp = fn = tn = 0
    for x, y in itertools.combinations(sorted(truth), 2):
        same_t = truth[x] == truth[y]
        same_e = est[x] == est[y]
        if same_t and same_e:
            tp += 1
        elif same_e:
            fp += 1
        elif same_t:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn


def ari_by_pairs(truth: dict, est: dict) -> float:
    tp, fp, fn, tn = pair_counts(truth, est)
    n_pairs = tp + fp + fn + tn
    same_t, same_e = tp + fn, tp + fp
    expected = same_t * same_e / n_pairs
    max_index = (same_t + same_e) / 2
    return (tp - expected) / (max_index - expected)


def recount_records(g: Graph, clusterings: list[dict]) -> list[tuple[int, int, int, int, float]]:
    """Per-edge (u, v, m_tilde, m, w) counted straight from the definition."""
    out = []
    for u, v in g.edges:
        xu, xv = g.ids[u], g.ids[v]
        mt = m = 0
        for c in clusterings:
            lu, lv = c.get(xu), c.get(xv)
            size_u = sum(1 for lab in c.values() if lab == lu) if lu is not None else 1
            size_v = sum(1 for lab in c.values() if lab == lv) if lv is not None else 1
            if size_u >= 2 and size_v >= 2:
                m += 1
                if lu == lv:
                    mt += 1
        out.append((u, v, mt, m, 0.0 if mt == 0 else mt / m))
    return out


def k4_pendant() -> Graph:
    # v1..v4 -> internal 0..3, v5 -> 4
    return Graph([1, 2, 3, 4, 5], [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 0)])


def two_k5_bridge() -> Graph:
    edges = list(itertools.combinations(range(5), 2)) + list(itertools.combinations(range(5, 10), 2))
    return Graph(list(range(10)), edges + [(4, 5)])


def random_bonus(seed: int, n: int) -> list[int]:
    rng = random.Random(10_000 + seed)
    return [rng.randint(0, 3) for _ in range(n)]


def layer_objective(g: Graph, layer: set, before: set) -> Fraction:
    """(|E(S)| + |E(S, U)|) / |S| recomputed from the edge list."""
    inside = sum(1 for u, v in g.edges if u in layer and v in layer)
    across = sum(1 for u, v in g.edges if (u in layer and v in before) or (v in layer and u in before))
    return Fraction(inside + across, len(layer))
