"""Planted-partition benchmark graphs."""

from __future__ import annotations

import numpy as np

from .graph import Clustering, Graph


def generate_planted_partition(
    n_clusters: int, cluster_size: int, p_in: float, p_out: float, seed: int = 0
) -> tuple[Graph, Clustering]:
    """Sample every node pair independently: ``p_in`` inside a block, ``p_out`` across.

    Node ``i`` belongs to block ``i // cluster_size``.  The graph keeps every
    node, including isolated ones.
    """
    if n_clusters < 1 or cluster_size < 1:
        raise ValueError("sizes must be >= 1")
    for p in (p_in, p_out):
        if not 0.0 <= p <= 1.0:
            raise ValueError("probabilities must lie in [0, 1]")
    n = n_clusters * cluster_size
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    same = (iu // cluster_size) == (ju // cluster_size)
    prob = np.where(same, p_in, p_out)
    keep = rng.random(iu.size) < prob
    edges = list(zip(iu[keep].tolist(), ju[keep].tolist()))
    g = Graph(list(range(n)), edges)
    truth = Clustering({i: i // cluster_size for i in range(n)})
    return g, truth
