"""Partition similarity: ARI, NMI, AMI, pair precision/recall/FPR and node coverage."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.special import gammaln

from .graph import Clustering


@dataclass
class ContingencyTable:
    counts: np.ndarray  # rows: truth clusters, columns: estimated clusters

    @property
    def a(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def b(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass
class PairConfusion:
    tp: int
    fp: int
    fn: int
    tn: int


def _label_order(c: Clustering, nodes: list[int]) -> dict:
    order: dict = {}
    for x in nodes:
        order.setdefault(c.assignment[x], len(order))
    return order


def contingency(truth: Clustering, est: Clustering) -> ContingencyTable:
    """Overlap counts; rows and columns ordered by first appearance over sorted node ids."""
    if truth.nodes() != est.nodes():
        raise ValueError("clusterings cover different node sets")
    nodes = sorted(truth.assignment)
    rows = _label_order(truth, nodes)
    cols = _label_order(est, nodes)
    counts = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for x in nodes:
        counts[rows[truth.assignment[x]], cols[est.assignment[x]]] += 1
    return ContingencyTable(counts)


def _comb2(x: np.ndarray) -> np.ndarray:
    return x * (x - 1) // 2


def ari(t: ContingencyTable) -> float:
    n = t.total
    if n < 2:
        raise ValueError("ARI needs at least two nodes")
    index = int(_comb2(t.counts).sum())
    sa = int(_comb2(t.a).sum())
    sb = int(_comb2(t.b).sum())
    expected = sa * sb / comb(n, 2)
    max_index = (sa + sb) / 2
    if max_index == expected:
        # both partitions trivial (all-in-one or all-singletons)
        return 1.0 if sa == sb else 0.0
    return (index - expected) / (max_index - expected)


def _entropy(counts: np.ndarray, n: int) -> float:
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def mutual_information(t: ContingencyTable) -> float:
    n = t.total
    nz = t.counts > 0
    nij = t.counts[nz].astype(float)
    outer = np.outer(t.a, t.b)[nz].astype(float)
    return float(max((nij / n * np.log(n * nij / outer)).sum(), 0.0))


def nmi(t: ContingencyTable) -> float:
    """MI over the arithmetic mean of the two entropies (natural log)."""
    n = t.total
    if n < 1:
        raise ValueError("NMI needs at least one node")
    ha, hb = _entropy(t.a, n), _entropy(t.b, n)
    if ha == 0 and hb == 0:
        return 1.0
    denom = (ha + hb) / 2
    return min(mutual_information(t) / denom, 1.0)


def expected_mutual_information(t: ContingencyTable) -> float:
    """E[MI] under the hypergeometric (permutation) model, summed with log-gamma terms."""
    n = t.total
    a = t.a.astype(np.int64)
    b = t.b.astype(np.int64)
    lg = gammaln(np.arange(n + 2, dtype=float))  # lg[k] = log((k-1)!)
    emi = 0.0
    for ai in a:
        for bj in b:
            lo = max(1, ai + bj - n)
            hi = min(ai, bj)
            if lo > hi:
                continue
            nij = np.arange(lo, hi + 1)
            term1 = nij / n * np.log(n * nij / (ai * bj))
            logp = (
                lg[ai + 1] + lg[bj + 1] + lg[n - ai + 1] + lg[n - bj + 1]
                - lg[n + 1] - lg[nij + 1] - lg[ai - nij + 1] - lg[bj - nij + 1]
                - lg[n - ai - bj + nij + 1]
            )
            emi += float((term1 * np.exp(logp)).sum())
    return emi


def ami(t: ContingencyTable) -> float:
    """(MI - E[MI]) / (mean(H_truth, H_est) - E[MI])."""
    n = t.total
    if n < 2:
        raise ValueError("AMI needs at least two nodes")
    ka, kb = len(t.a), len(t.b)
    if (ka == kb == 1) or (ka == kb == n):
        return 1.0
    mi = mutual_information(t)
    emi = expected_mutual_information(t)
    ha, hb = _entropy(t.a, n), _entropy(t.b, n)
    denom = (ha + hb) / 2 - emi
    if abs(denom) < 1e-15:
        return 0.0
    return (mi - emi) / denom


def pair_confusion(truth: Clustering, est: Clustering) -> PairConfusion:
    t = contingency(truth, est)
    n = t.total
    tp = int(_comb2(t.counts).sum())
    same_truth = int(_comb2(t.a).sum())
    same_est = int(_comb2(t.b).sum())
    fp = same_est - tp
    fn = same_truth - tp
    tn = comb(n, 2) - tp - fp - fn
    return PairConfusion(tp, fp, fn, tn)


def pair_metrics(truth: Clustering, est: Clustering) -> tuple[float, float, float, PairConfusion]:
    """Precision, recall and FPR over the co-clustered-pair relation.

    Empty denominators give precision 1, recall 1 and FPR 0.
    """
    pc = pair_confusion(truth, est)
    precision = pc.tp / (pc.tp + pc.fp) if pc.tp + pc.fp else 1.0
    recall = pc.tp / (pc.tp + pc.fn) if pc.tp + pc.fn else 1.0
    fpr = pc.fp / (pc.fp + pc.tn) if pc.fp + pc.tn else 0.0
    return precision, recall, fpr, pc


def node_coverage(c: Clustering) -> float:
    """Fraction of nodes in clusters with at least two members."""
    if not c.assignment:
        return 0.0
    sizes = c.sizes()
    return sum(1 for x in c.assignment.values() if sizes[x] >= 2) / len(c.assignment)


def evaluate(truth: Clustering, est: Clustering) -> dict[str, float]:
    t = contingency(truth, est)
    precision, recall, fpr, _ = pair_metrics(truth, est)
    return {
        "ami": ami(t),
        "ari": ari(t),
        "nmi": nmi(t),
        "precision": precision,
        "recall": recall,
        "fpr": fpr,
        "coverage": node_coverage(est),
    }
