import itertools

import pytest

from starwp import graphs as G


def test_full_subgraph_examples():
    c4 = G.cycle_graph(["a", "b", "c", "d"])
    sub = G.full_subgraph(c4, ["a", "b", "c"])
    assert len(sub.edges) == 2
    assert len(G.full_subgraph(c4, [])) == 0
    k4 = G.complete_graph("wxyz")
    assert len(G.full_subgraph(k4, ["w", "z"]).edges) == 1


def test_starred_examples():
    assert not G.is_starred(G.cycle_graph("abcd"))
    assert not G.is_starred(G.path_graph("abcd"))
    assert G.is_starred(G.complete_graph("abcde"))
    two_triangles = G.SimplicialGraph("abcdef", [("a", "b"), ("b", "c"), ("a", "c"),
                                                 ("d", "e"), ("e", "f"), ("d", "f")])
    assert G.is_starred(two_triangles)


def test_chordal_examples():
    assert not G.is_chordal(G.cycle_graph("abcd"))
    assert not G.is_chordal(G.cycle_graph("abcde"))
    assert G.is_chordal(G.path_graph("abcd"))


def test_nodes_examples():
    assert set(G.nodes(G.complete_graph("abc"))) == set("abc")
    assert G.nodes(G.path_graph(["v1", "v2", "v3"])) == ("v2",)
    assert G.nodes(G.SimplicialGraph("xy", ())) == ()


def test_components():
    assert sorted(map(sorted, G.connected_components(G.SimplicialGraph("xy", ())))) == [["x"], ["y"]]
    assert len(G.connected_components(G.path_graph("abc"))) == 1
    g = G.SimplicialGraph("abcde", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    assert sorted(len(c) for c in G.connected_components(g)) == [1, 4]


def test_spans_sub_star():
    p = G.path_graph(["v1", "v2", "v3"])
    assert G.spans_sub_star(p, {"v1", "v2"})
    assert not G.spans_sub_star(p, {"v1", "v3"})
    assert G.spans_sub_star(p, {"v2"})


def test_graph_errors():
    with pytest.raises(G.GraphError):
        G.SimplicialGraph("ab", [("a", "a")])
    with pytest.raises(G.GraphError):
        G.SimplicialGraph("ab", [("a", "c")])


def test_parse_graph_round_trip():
    g = G.parse_graph("graph { vertices: u v w; edges: (u v) (v w) }")
    assert g == G.path_graph("uvw")
    assert G.parse_graph(str(g)) == g


def test_every_small_starred_graph_is_chordal_and_connected_ones_have_nodes():
    verts = "abcde"
    pairs = list(itertools.combinations(verts, 2))
    for mask in range(1 << len(pairs)):
        g = G.SimplicialGraph(verts, [e for i, e in enumerate(pairs) if mask >> i & 1])
        if G.is_starred(g):
            assert G.is_chordal(g)
            if G.is_connected(g):
                assert G.nodes(g)
