"""TSV writers for clusterings and vertex-value (density) files."""

from __future__ import annotations

from datetime import datetime, timezone

from . import graph
from .flow import VertexValueVector
from .graph import Clustering, Graph


def write_clustering(g: Graph, c: Clustering, path) -> None:
    """``node<TAB>cluster`` for every node of ``g``, in internal-id order."""
    graph.write_clustering(c.restricted_to(g.ids), path, order=g.ids)


def write_density(g: Graph, values: VertexValueVector, path) -> None:
    """``node<TAB>value`` lines; exact values get a third ``p/q`` column."""
    with open(path, "w") as fh:
        for x, v in zip(g.ids, values.values):
            if values.exact:
                fh.write(f"{x}\t{float(v):.6f}\t{v.numerator}/{v.denominator}\n")
            else:
                fh.write(f"{x}\t{float(v):.6f}\n")


def read_density(path) -> dict[int, float]:
    out = {}
    with open(path) as fh:
        for line in fh:
            fields = line.split()
            if fields:
                out[int(fields[0])] = float(fields[1])
    return out


def log_line(msg: str) -> str:
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return f"{stamp} {msg}\n"
