"""Edge-agreement cluster ensemble.

Each edge is weighted by how often the input clusterings co-cluster its
endpoints, counted only over the clusterings that place both endpoints in
non-singleton clusters.  Weak edges are deleted and the surviving network
is handed to a final clusterer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph import Clustering, Graph


@dataclass(frozen=True)
class EnsembleEdgeRecord:
    u: int  # internal ids, u < v
    v: int
    m_tilde: int
    m: int
    weight: float


@dataclass(frozen=True)
class MergerConfig:
    threshold: float = -1.0
    weighted_output: bool = False
    weighting_strategy: int = 0

    def __post_init__(self):
        if self.weighting_strategy != 0:
            raise ValueError("only weighting strategy 0 is defined")
        if self.threshold < 0 and self.threshold != -1:
            raise ValueError("threshold must be >= 0, or -1 to keep every positive-weight edge")


def _labels(g: Graph, c: Clustering) -> tuple[list, list[int]]:
    unknown = set(c.assignment) - set(g.index)
    if unknown:
        raise KeyError(f"clustering mentions unknown node ids: {sorted(unknown)[:5]}")
    sizes = c.sizes()
    label = []
    size = []
    for x in g.ids:
        if x in c.assignment:
            label.append(c.assignment[x])
            size.append(sizes[c.assignment[x]])
        else:
            # absent means singleton
            label.append(None)
            size.append(1)
    return label, size


def compute_edge_weights(g: Graph, clusterings: Sequence[Clustering]) -> list[EnsembleEdgeRecord]:
    """One record per edge of ``g`` with ``weight = m_tilde / m`` (0 when ``m_tilde`` is 0)."""
    if not clusterings:
        raise ValueError("need at least one clustering")
    tables = [_labels(g, c) for c in clusterings]
    out = []
    for u, v in g.edges:
        mt = m = 0
        for label, size in tables:
            if size[u] > 1 and size[v] > 1:
                m += 1
                if label[u] == label[v]:
                    mt += 1
        out.append(EnsembleEdgeRecord(u, v, mt, m, mt / m if mt else 0.0))
    return out


def surviving(records: Sequence[EnsembleEdgeRecord], threshold: float) -> list[EnsembleEdgeRecord]:
    """Edges kept at ``threshold``: positive weight and ``weight >= threshold``."""
    return [r for r in records if r.weight > 0 and r.weight >= threshold]


def build_merged_network(
    g: Graph, records: Sequence[EnsembleEdgeRecord], cfg: MergerConfig = MergerConfig()
) -> Graph:
    """The network left after deleting weak edges, over the same node universe as ``g``."""
    if len(records) != g.m or any((r.u, r.v) != e for r, e in zip(records, g.edges)):
        raise ValueError("records must cover exactly the edges of g, in order")
    keep = surviving(records, cfg.threshold)
    weights = [r.weight for r in keep] if cfg.weighted_output else None
    return Graph(g.ids, [(r.u, r.v) for r in keep], weights)


def write_merged_network(
    g: Graph, records: Sequence[EnsembleEdgeRecord], threshold: float, path
) -> None:
    """Three-column ``source<TAB>target<TAB>weight`` file of the surviving edges."""
    with open(path, "w") as fh:
        for r in surviving(records, threshold):
            fh.write(f"{g.ids[r.u]}\t{g.ids[r.v]}\t{r.weight:.6g}\n")


def write_records(g: Graph, records: Sequence[EnsembleEdgeRecord], path) -> None:
    with open(path, "w") as fh:
        for r in records:
            fh.write(f"{g.ids[r.u]}\t{g.ids[r.v]}\t{r.m_tilde}\t{r.m}\t{r.weight:.6g}\n")
