import random

import pytest

from densecluster.ensemble import (
    EnsembleEdgeRecord,
    MergerConfig,
    build_merged_network,
    compute_edge_weights,
    surviving,
    write_merged_network,
)
from densecluster.graph import Clustering, Graph

from oracles import random_graph, recount_records

PATH = Graph([10, 20, 30], [(0, 1), (1, 2)])


def _random_clusterings(g: Graph, seed: int, count: int = 3) -> list[Clustering]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        k = rng.randint(1, g.n)
        nodes = [x for x in g.ids if rng.random() > 0.15]  # some nodes left out on purpose
        out.append(Clustering({x: rng.randrange(k) for x in nodes}))
    return out


def test_worked_examples():
    g = Graph(["u", "v", "a", "b"], [(0, 1), (0, 2), (1, 3)])
    both = Clustering({"u": 0, "v": 0, "a": 1, "b": 1})
    split = Clustering({"u": 0, "a": 0, "v": 1, "b": 1})
    apart = Clustering({"u": 0, "v": 1, "a": 2, "b": 3})
    r = {(x.u, x.v): x for x in compute_edge_weights(g, [both, both])}
    assert (r[(0, 1)].m_tilde, r[(0, 1)].m, r[(0, 1)].weight) == (2, 2, 1.0)
    r = {(x.u, x.v): x for x in compute_edge_weights(g, [both, split])}
    assert (r[(0, 1)].m_tilde, r[(0, 1)].m, r[(0, 1)].weight) == (1, 2, 0.5)
    r = {(x.u, x.v): x for x in compute_edge_weights(g, [apart, apart])}
    assert (r[(0, 1)].m_tilde, r[(0, 1)].m, r[(0, 1)].weight) == (0, 0, 0.0)


def test_missing_nodes_are_singletons():
    c = Clustering({10: 0, 20: 0})
    recs = compute_edge_weights(PATH, [c])
    assert [(r.m_tilde, r.m) for r in recs] == [(1, 1), (0, 0)]


def test_errors():
    with pytest.raises(ValueError):
        compute_edge_weights(PATH, [])
    with pytest.raises(KeyError):
        compute_edge_weights(PATH, [Clustering({99: 0})])
    with pytest.raises(ValueError):
        MergerConfig(threshold=-0.5)
    with pytest.raises(ValueError):
        MergerConfig(weighting_strategy=1)
    with pytest.raises(ValueError):
        build_merged_network(PATH, [], MergerConfig())


def test_threshold_examples():
    g = Graph(range(5), [(0, 1), (1, 2), (2, 3), (3, 4)])
    recs = [EnsembleEdgeRecord(u, v, 0, 0, w) for (u, v), w in zip(g.edges, [1.0, 0.5, 0.4, 0.0])]
    assert build_merged_network(g, recs, MergerConfig(0.5)).edges == [(0, 1), (1, 2)]
    assert build_merged_network(g, recs, MergerConfig(-1)).edges == [(0, 1), (1, 2), (2, 3)]
    assert build_merged_network(g, recs, MergerConfig(1.0)).edges == [(0, 1)]
    # zero-weight edges go even at t = 0
    assert build_merged_network(g, recs, MergerConfig(0.0)).edges == [(0, 1), (1, 2), (2, 3)]
    merged = build_merged_network(g, recs, MergerConfig(0.5, weighted_output=True))
    assert merged.weights == [1.0, 0.5] and merged.ids == g.ids


@pytest.mark.parametrize("seed", range(30))
def test_records_match_recount(seed):
    g = random_graph(seed, 3, 20, p=0.3)
    cs = _random_clusterings(g, seed)
    got = [(r.u, r.v, r.m_tilde, r.m, r.weight) for r in compute_edge_weights(g, cs)]
    assert got == recount_records(g, [c.assignment for c in cs])
    # order and label independence
    shuffled = [Clustering({x: ("p", lab) for x, lab in c.assignment.items()}) for c in reversed(cs)]
    assert compute_edge_weights(g, shuffled) == compute_edge_weights(g, cs)
    kept = [set(r.u * 1000 + r.v for r in surviving(compute_edge_weights(g, cs), t)) for t in (-1, 0.25, 0.5, 0.75, 1.0)]
    assert all(b <= a for a, b in zip(kept, kept[1:]))


def test_single_clustering_keeps_everything():
    g = random_graph(2, 10, 10, p=0.5)
    c = Clustering({x: 0 for x in g.ids})
    merged = build_merged_network(g, compute_edge_weights(g, [c]), MergerConfig(1.0))
    assert merged.edges == g.edges


def test_write_merged_network(tmp_path):
    g = Graph([10, 20, 30, 40], [(0, 1), (1, 2), (2, 3)])
    c1 = Clustering({10: 0, 20: 0, 30: 0, 40: 0})
    c2 = Clustering({10: 0, 20: 0, 30: 1, 40: 1})
    recs = compute_edge_weights(g, [c1, c2])
    p = tmp_path / "m.tsv"
    write_merged_network(g, recs, 0.5, p)
    assert p.read_text() == "10\t20\t1\n20\t30\t0.5\n30\t40\t1\n"
    write_merged_network(g, recs, 0.75, p)
    assert p.read_text() == "10\t20\t1\n30\t40\t1\n"
