import networkx as nx
import pytest
from hypothesis import given, settings
from networkx.algorithms.approximation import treewidth_min_degree

from rigbench.graph import Graph, GraphError, complete_graph, cycle_graph, path_graph
from rigbench.suite import helly_exhaustive, subtrees_of, td_fixture_failures
from rigbench.treedec import (
    TreeDecomposition,
    clique_sum,
    helly_common_node,
    td_from_networkx,
    torso,
    trivial_td,
    verify_td,
)

from test_graph import graphs


def test_hand_computed_fixtures():
    assert td_fixture_failures() == []


def test_verify_td_reasons():
    g = path_graph(3)
    tree = path_graph(2)
    assert verify_td(g, TreeDecomposition(tree, {0: {0, 1}, 1: {1, 2}})).width == 1
    v = verify_td(g, TreeDecomposition(tree, {0: {0, 1}, 1: {2}}))
    assert v.reason == "uncovered edge"
    # vertex 0 in both end bags but not the middle one
    v = verify_td(path_graph(2), TreeDecomposition(path_graph(3), {0: {0, 1}, 1: {1}, 2: {0}}))
    assert v.reason == "disconnected trace"
    v = verify_td(Graph(3, [(0, 1)]), TreeDecomposition(Graph(1, []), {0: {0, 1}}))
    assert v.reason == "uncovered vertex"
    v = verify_td(g, TreeDecomposition(Graph(1, []), {0: {0, 1, 2, 7}}))
    assert v.reason == "unknown vertex"
    v = verify_td(g, TreeDecomposition(tree, {0: {0, 1, 2}}))
    assert v.reason == "missing bag"


def test_non_tree_rejected():
    with pytest.raises(GraphError):
        verify_td(path_graph(3), TreeDecomposition(cycle_graph(3), {0: {0}, 1: {1}, 2: {2}}))
    with pytest.raises(GraphError):
        helly_common_node(Graph(2, []), [{0}])


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=9))
def test_trivial_decomposition_valid(g):
    v = verify_td(g, trivial_td(g))
    assert v and v.width == g.n - 1 and v.adhesion == 0


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=9))
def test_heuristic_decompositions_and_torsos(g):
    _, decomp = treewidth_min_degree(g.to_networkx())
    nodes = sorted(decomp.nodes, key=sorted)
    t = nx.relabel_nodes(decomp, {x: i for i, x in enumerate(nodes)})
    td = td_from_networkx(t, {i: x for i, x in enumerate(nodes)})
    v = verify_td(g, td)
    assert v
    assert v.width == max(len(b) for b in td.bags.values()) - 1
    for node in td.tree.vertices:
        t_graph, keep = torso(g, td, node)
        induced, _ = g.induced_subgraph(keep)
        assert all(t_graph.has_edge(a, b) for a, b in induced.edges())
        for y in td.tree.neighbors(node):
            shared = [keep.index(x) for x in td.bags[node] & td.bags[y]]
            assert all(t_graph.has_edge(a, b) for a in shared for b in shared if a != b)


def test_torso_unknown_node():
    g = path_graph(3)
    with pytest.raises(GraphError):
        torso(g, trivial_td(g), 5)


def test_clique_sum_examples_and_errors():
    tri = complete_graph(3)
    d = clique_sum(tri, [0, 1], tri, [1, 2])
    assert (d.n, d.m) == (4, 5)
    with pytest.raises(GraphError):
        clique_sum(path_graph(3), [0, 2], tri, [0, 1])
    with pytest.raises(GraphError):
        clique_sum(tri, [0, 0], tri, [0, 1])
    with pytest.raises(GraphError):
        clique_sum(tri, [0, 1], tri, [0])
    with pytest.raises(GraphError):
        clique_sum(tri, [0, 1], tri, [0, 1], drop_edges=[(0, 2)])


def test_clique_sum_of_decomposable_pieces_has_decomposition():
    # gluing along a clique gives a two-bag decomposition with the clique as adhesion
    k4 = complete_graph(4)
    g = clique_sum(k4, [1, 2, 3], k4, [0, 1, 2])
    td = TreeDecomposition(path_graph(2), {0: {0, 1, 2, 3}, 1: {1, 2, 3, 4}})
    v = verify_td(g, td)
    assert v and v.width == 3 and v.adhesion == 3


def test_helly_examples():
    p5 = path_graph(5)
    assert helly_common_node(p5, [{0, 1, 2}, {1, 2, 3}, {2, 3, 4}]) == (2, None)
    assert helly_common_node(p5, [{0}, {4}]) == (None, (0, 1))
    with pytest.raises(GraphError):
        helly_common_node(p5, [{0, 2}])
    with pytest.raises(GraphError):
        helly_common_node(p5, [])
    # validation can be skipped, the answer is the same
    assert helly_common_node(p5, [{0, 1}, {1, 2}], check=False) == (1, None)


def test_subtrees_of_path_and_star():
    assert len(subtrees_of(path_graph(4))) == 10
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    # 3 leaves alone plus every non-empty set containing the centre
    assert len(subtrees_of(star)) == 3 + 8


def test_helly_exhaustive_small():
    cases, bad = helly_exhaustive(6)
    assert cases > 0 and bad == 0


def test_td_round_trip():
    td = TreeDecomposition(path_graph(2), {0: {0, 1}, 1: {1, 2}})
    assert TreeDecomposition.from_dict(td.to_dict()) == td
