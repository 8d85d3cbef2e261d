import networkx as nx
import pytest
from hypothesis import given, settings

from rigbench.constructions import build_g
from rigbench.graph import GraphError, cycle_graph, path_graph, subdivide
from rigbench.io import (
    from_dimacs,
    from_graph6,
    from_json,
    read_graph,
    to_dimacs,
    to_graph6,
    to_json,
    write_graph,
)

from test_graph import graphs


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=12))
def test_round_trips(g):
    assert from_graph6(to_graph6(g)).same_edges(g)
    assert from_dimacs(to_dimacs(g)).same_edges(g)
    assert from_json(to_json(g)) == g
    for fmt in ("graph6", "dimacs", "json"):
        assert read_graph(write_graph(g, fmt)).same_edges(g)


def test_graph6_agrees_with_networkx():
    g = cycle_graph(5)
    assert to_graph6(g) == nx.to_graph6_bytes(nx.cycle_graph(5), header=False).decode().strip()
    assert from_graph6(">>graph6<<" + to_graph6(g)).same_edges(g)
    with pytest.raises(GraphError):
        from_graph6("!!!")


def test_dimacs_text_and_errors():
    assert to_dimacs(path_graph(3)) == "p edge 3 2\ne 1 2\ne 2 3\n"
    g = from_dimacs("c comment\np edge 3 1\ne 1 3\n")
    assert sorted(g.edges()) == [(0, 2)]
    with pytest.raises(GraphError):
        from_dimacs("e 1 2\n")
    with pytest.raises(GraphError):
        from_dimacs("p edge 3 2\ne 1 2\n")
    with pytest.raises(GraphError):
        from_dimacs("p edge 2 1\nx 1 2\n")


def test_json_keeps_labels():
    g = subdivide(cycle_graph(3), 1)
    back = from_json(to_json(g))
    assert back.labels == g.labels
    assert to_json(back) == to_json(g)


def test_read_graph_accepts_bundle():
    bundle = build_g(1)
    from rigbench.io import dumps

    text = dumps(bundle.to_dict())
    assert read_graph(text) == bundle.graph


def test_bad_json_ids():
    with pytest.raises(GraphError):
        read_graph('{"vertices":[{"id":1}],"edges":[]}')
