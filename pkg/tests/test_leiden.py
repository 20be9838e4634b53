import itertools
import random

import pytest

from densecluster.graph import Clustering, Graph, connected_components, induced_subgraph
from densecluster.leiden import ObjectiveSpec, leiden_cluster, quality

from oracles import random_graph, set_partitions

MOD = ObjectiveSpec.modularity()
CPM = ObjectiveSpec.cpm(0.01)


def two_triangles_bridged():
    return Graph(range(6), [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


def _best(g: Graph, obj: ObjectiveSpec) -> float:
    return max(quality(g, Clustering.from_clusters(p), obj) for p in set_partitions(list(range(g.n))))


def test_objective_validation():
    with pytest.raises(ValueError):
        ObjectiveSpec("cpm", 0.0)
    with pytest.raises(ValueError):
        ObjectiveSpec("louvain", 1.0)
    with pytest.raises(ValueError):
        leiden_cluster(Graph(range(2), [(0, 1)]), MOD, iterations=0)


def test_examples():
    assert leiden_cluster(two_triangles_bridged(), MOD).members() == [[0, 1, 2], [3, 4, 5]]
    k4 = Graph(range(4), itertools.combinations(range(4), 2))
    c = leiden_cluster(k4, CPM)
    assert c.members() == [[0, 1, 2, 3]]
    assert quality(k4, c, CPM) == pytest.approx(5.94)
    empty = Graph(range(3), [])
    for obj in (MOD, CPM):
        assert leiden_cluster(empty, obj).members() == [[0], [1], [2]]


def test_quality_identities():
    g = random_graph(4, 8, 8)
    assert quality(g, Clustering.singletons(range(g.n)), CPM) == 0
    assert quality(g, Clustering({v: 0 for v in range(g.n)}), MOD) == pytest.approx(0.0)
    c = leiden_cluster(g, MOD)
    relabelled = Clustering({x: ("z", lab) for x, lab in c.assignment.items()})
    assert quality(g, relabelled, MOD) == quality(g, c, MOD)


def test_modularity_matches_networkx():
    nx = pytest.importorskip("networkx")
    from networkx.algorithms.community import modularity

    for seed in range(10):
        g = random_graph(seed, 6, 15)
        if g.m == 0:
            continue
        c = leiden_cluster(g, MOD, seed=seed)
        h = nx.Graph()
        h.add_nodes_from(range(g.n))
        h.add_edges_from(g.edges)
        assert quality(g, c, MOD) == pytest.approx(modularity(h, [set(m) for m in c.members()]))


@pytest.mark.parametrize("seed", range(25))
def test_connected_and_not_worse_than_singletons(seed):
    g = random_graph(seed, 5, 40, p=0.12)
    for obj in (MOD, CPM, ObjectiveSpec.cpm(0.3)):
        c = leiden_cluster(g, obj, seed=seed)
        assert sorted(c.assignment) == list(range(g.n))
        for members in c.members():
            assert len(connected_components(induced_subgraph(g, members))) == 1
        assert quality(g, c, obj) >= quality(g, Clustering.singletons(range(g.n)), obj) - 1e-12


def test_deterministic_per_seed():
    g = random_graph(9, 40, 40, p=0.1)
    assert leiden_cluster(g, MOD, seed=3) == leiden_cluster(g, MOD, seed=3)


def test_weights_are_honoured():
    # a heavy bridge pulls its endpoints together under modularity
    edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]
    light = Graph(range(6), edges, [1, 1, 1, 1, 1, 1, 1])
    heavy = Graph(range(6), edges, [1, 1, 1, 1, 1, 1, 50])
    assert leiden_cluster(light, MOD).members() == [[0, 1, 2], [3, 4, 5]]
    assert [2, 3] in leiden_cluster(heavy, MOD).members()


def test_reaches_exhaustive_optimum_on_small_graphs():
    rng = random.Random(0)
    hits = runs = 0
    for seed in range(100):
        n = rng.randint(4, 8)
        g = random_graph(seed, n, n, p=rng.uniform(0.2, 0.7))
        if g.m == 0:
            continue
        for obj in (MOD, ObjectiveSpec.cpm(rng.choice([0.01, 0.2, 0.5]))):
            runs += 1
            hits += quality(g, leiden_cluster(g, obj, seed=seed), obj) >= _best(g, obj) - 1e-9
    assert hits / runs >= 0.95
