"""CC and WCC post-processing of clusterings."""

from __future__ import annotations

import math
from typing import Callable

from .graph import Clustering, Graph, clustering_from_sets, connected_components, induced_subgraph, internal_sets
from .maxflow import min_cut_global


def log10_bound(n: int) -> float:
    return math.log10(n)


def cc_treatment(g: Graph, c: Clustering) -> Clustering:
    """Split every internally disconnected cluster into its connected components."""
    comps = []
    for members in internal_sets(g, c):
        comps.extend(connected_components(g, members))
    return clustering_from_sets(g, sorted(comps))


def is_well_connected(g: Graph, members: list[int], bound: Callable[[int], float] = log10_bound) -> bool:
    if len(members) < 2:
        return True
    sub = induced_subgraph(g, members)
    if len(connected_components(sub)) > 1:
        return False
    cut, _ = min_cut_global(sub)
    return cut > bound(len(members))


def wcc_treatment(g: Graph, c: Clustering, bound: Callable[[int], float] = log10_bound) -> Clustering:
    """Split clusters along global minimum cuts until each has ``mincut > bound(size)``.

    Singletons are left alone; every other output cluster is connected and
    well-connected.  The result refines ``c``.
    """
    done: list[list[int]] = []
    stack: list[list[int]] = []
    for members in internal_sets(g, c):
        stack.extend(connected_components(g, members))
    while stack:
        members = stack.pop()
        if len(members) == 1:
            done.append(members)
            continue
        sub = induced_subgraph(g, members)
        cut, (side, rest) = min_cut_global(sub)
        if cut > bound(len(members)):
            done.append(members)
            continue
        for part in (side, rest):
            stack.extend(connected_components(g, [members[i] for i in part]))
    return clustering_from_sets(g, sorted(done))
