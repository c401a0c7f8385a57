import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from magtwist.graph import (
    INF,
    Graph,
    GraphError,
    SubgraphEmbedding,
    all_pairs_distances,
    are_isometric,
    cartesian_product,
    complete_graph,
    cycle_graph,
    disjoint_union,
    is_between,
    is_convex,
    is_projecting_decomposition,
    path_graph,
    path_length,
    project_vertex,
)
from strategies import graphs


def test_triangle_distances():
    d = all_pairs_distances(complete_graph(3))
    assert all(d(u, v) == 1 for u in d.vertices for v in d.vertices if u != v)


def test_path_and_isolated_distances():
    d = path_graph(3, "x").distances
    assert d("x0", "x2") == 2
    iso = Graph.from_edges(["a", "b"], [])
    assert iso.distances("a", "b") is INF


def test_infinity_arithmetic():
    assert INF + 3 is INF and 3 + INF is INF
    assert 10**9 < INF and not INF < INF
    assert INF == INF


@pytest.mark.parametrize("edges, msg", [
    ([("a", "a")], "loop"),
    ([("a", "b"), ("b", "a")], "twice"),
    ([("a", "z")], "z"),
])
def test_invalid_graphs_rejected(edges, msg):
    with pytest.raises(GraphError, match=msg):
        Graph.from_edges(["a", "b"], edges)


def test_duplicate_labels_rejected():
    with pytest.raises(GraphError):
        Graph.from_edges(["a", "a"], [])


@given(graphs())
def test_distances_match_networkx(g):
    ref = oracles.distances(g)
    d = g.distances
    for u in g.vertices:
        for v in g.vertices:
            assert d(u, v) == ref[u].get(v, INF)


@given(graphs())
def test_distance_matrix_invariants(g):
    g.distances.check_invariants(g)


def test_embedding_must_be_induced():
    tri = complete_graph(3)
    pair = Graph.from_edges(["a", "b"], [])
    with pytest.raises(GraphError):
        SubgraphEmbedding(pair, tri, {"a": "v0", "b": "v1"})


def test_convexity_examples(fig2):
    p3 = path_graph(3, "x")
    assert is_convex(p3, SubgraphEmbedding.inclusion(p3, ["x0", "x1"]))
    assert not is_convex(p3, SubgraphEmbedding.inclusion(p3, ["x0", "x2"]))
    assert is_convex(fig2.X, SubgraphEmbedding.inclusion(fig2.X, ["k0", "k1"]))


@given(graphs(min_vertices=1, max_vertices=7), st.data())
@settings(max_examples=80)
def test_convexity_matches_oracle(g, data):
    labels = data.draw(st.lists(st.sampled_from(g.vertices), min_size=1, unique=True))
    assert is_convex(g, SubgraphEmbedding.inclusion(g, labels)) == oracles.is_convex(g, labels)


@given(graphs(min_vertices=2, max_vertices=7, connected=True))
@settings(max_examples=80)
def test_projection_matches_brute_force(g):
    labels = list(g.vertices[:2])
    w = SubgraphEmbedding.inclusion(g, labels)
    for v in g.vertices:
        assert project_vertex(g, w, v) == oracles.projection(g, labels, v)


def test_projection_examples(fig4):
    K = ["v4", "v5", "v6", "v7"]
    w = SubgraphEmbedding.inclusion(fig4.X, K)
    assert project_vertex(fig4.X, w, "v5") == "v5"
    assert project_vertex(fig4.X, w, "H:v8") in K
    assert project_vertex(fig4.X, w, "H:v9") is None


def test_projecting_decompositions(fig2):
    p3 = path_graph(3, "x")
    left = SubgraphEmbedding.inclusion(p3, ["x0", "x1"])
    right = SubgraphEmbedding.inclusion(p3, ["x1", "x2"])
    assert is_projecting_decomposition(p3, left, right)
    whole = SubgraphEmbedding.inclusion(p3, p3.vertices)
    assert is_projecting_decomposition(p3, whole, whole)
    # G' = G ∪ H_0 and H' = H_* ∪ K miss some edges of X
    g_prime = SubgraphEmbedding.inclusion(fig2.X, fig2.g_vertices + fig2.neutral)
    h_prime = SubgraphEmbedding.inclusion(fig2.X, fig2.biased + fig2.gluing)
    assert not is_projecting_decomposition(fig2.X, g_prime, h_prime)


def test_betweenness():
    p3 = path_graph(3, "x").distances
    assert is_between(p3, "x0", "x0", "x2")
    assert is_between(p3, "x0", "x1", "x2")
    assert not is_between(complete_graph(3).distances, "v0", "v1", "v2")


def test_path_length():
    k2 = complete_graph(2).distances
    assert path_length(k2, ["v0"]) == 0
    assert path_length(k2, ["v0", "v1", "v0"]) == 2
    assert path_length(Graph.from_edges(["a", "c"], []).distances, ["a", "c"]) is INF


def test_cartesian_product():
    sq = cartesian_product(complete_graph(2), complete_graph(2))
    assert are_isometric(sq, cycle_graph(4))
    x = cycle_graph(5)
    assert are_isometric(cartesian_product(x, Graph.from_edges(["p"], [])), x)


@given(graphs(max_vertices=4), graphs(max_vertices=4))
@settings(max_examples=30)
def test_product_size(x, y):
    p = cartesian_product(x, y)
    assert len(p) == len(x) * len(y)
    assert len(p.edges) == len(x) * len(y.edges) + len(y) * len(x.edges)


def test_disjoint_union_size():
    u = disjoint_union(cycle_graph(3), path_graph(2))
    assert len(u) == 5 and len(u.edges) == 4


@given(graphs(max_vertices=6), graphs(max_vertices=6))
@settings(max_examples=60)
def test_isometry_matches_networkx(g, h):
    assert are_isometric(g, h) == oracles.isometric(g, h)
