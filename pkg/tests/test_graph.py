from itertools import permutations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigbench.graph import (
    UNBOUNDED,
    EdgeSubdivision,
    Graph,
    GraphBuilder,
    GraphError,
    Plain,
    SizeGuardError,
    are_isomorphic,
    complete_graph,
    contract_sets,
    cycle_graph,
    disjoint_copies,
    girth,
    grid_graph,
    path_graph,
    subdivide,
    wheel_graph,
)


@st.composite
def graphs(draw, max_n=9, min_n=1):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph(n, chosen)


def girth_oracle(g: Graph):
    """Shortest cycle through each edge uv = 1 + dist(u, v) once uv is removed."""
    h = g.to_networkx()
    best = None
    for u, v in list(h.edges):
        h.remove_edge(u, v)
        try:
            d = nx.shortest_path_length(h, u, v) + 1
            best = d if best is None else min(best, d)
        except nx.NetworkXNoPath:
            pass
        h.add_edge(u, v)
    return best


def iso_oracle(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.m != g2.m:
        return False
    e2 = set(g2.edges())
    for perm in permutations(range(g1.n)):
        if all((min(perm[u], perm[v]), max(perm[u], perm[v])) in e2 for u, v in g1.edges()):
            return True
    return False


def test_rejects_loops_duplicates_and_range():
    with pytest.raises(GraphError):
        Graph(2, [(0, 0)])
    with pytest.raises(GraphError):
        Graph(2, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        Graph(2, [(0, 2)])


def test_basic_accessors():
    g = cycle_graph(5)
    assert g.n == 5 and g.m == 5
    assert g.neighbors(0) == {1, 4}
    assert g.has_edge(4, 0) and not g.has_edge(0, 2)
    assert list(g.edges()) == sorted(g.edges())
    assert all(u < v for u, v in g.edges())


def test_induced_subgraph_and_components():
    g = path_graph(5)
    sub, old = g.induced_subgraph([0, 1, 3, 4])
    assert old == [0, 1, 3, 4]
    assert sorted(sub.edges()) == [(0, 1), (2, 3)]
    assert g.components([0, 1, 3, 4]) == [[0, 1], [3, 4]]
    assert not g.is_connected_set([0, 2])
    assert not g.is_connected_set([])


def test_builder_rejects_duplicate_edges():
    b = GraphBuilder()
    u, v = b.add_vertex(), b.add_vertex(Plain(3))
    b.add_edge(u, v)
    with pytest.raises(GraphError):
        b.add_edge(v, u)
    g = b.build()
    assert g.label(1) == Plain(3)


@pytest.mark.parametrize(
    "g, expected",
    [
        (cycle_graph(3), 3),
        (cycle_graph(7), 7),
        (complete_graph(4), 3),
        (grid_graph(3, 3), 4),
        (nx.petersen_graph(), 5),
        (path_graph(6), UNBOUNDED),
        (Graph(1, []), UNBOUNDED),
    ],
)
def test_girth_known_values(g, expected):
    if isinstance(g, nx.Graph):
        g = Graph.from_networkx(g)
    assert girth(g) is expected if expected is UNBOUNDED else girth(g) == expected


def test_unbounded_is_not_orderable():
    with pytest.raises(TypeError):
        UNBOUNDED < 3  # noqa: B015
    assert repr(UNBOUNDED) == "Unbounded"


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=10))
def test_girth_matches_oracle(g):
    want = girth_oracle(g)
    got = girth(g)
    assert (got is UNBOUNDED) if want is None else got == want


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=7), st.integers(1, 3))
def test_subdivide_counts_and_girth(g, ell):
    s = subdivide(g, ell)
    assert s.n == g.n + ell * g.m
    assert s.m == (ell + 1) * g.m
    gg = girth(g)
    if gg is UNBOUNDED:
        assert girth(s) is UNBOUNDED
    else:
        assert girth(s) == (ell + 1) * gg
    for v in range(g.n, s.n):
        assert s.degree(v) == 2
        assert isinstance(s.label(v), EdgeSubdivision)


def test_subdivide_layout():
    s = subdivide(path_graph(3), 2)
    # edge (0,1) gets 3, 4; edge (1,2) gets 5, 6
    assert sorted(s.edges()) == [(0, 3), (1, 4), (1, 5), (2, 6), (3, 4), (5, 6)]
    assert s.label(4) == EdgeSubdivision(0, 0, 1, 2)
    with pytest.raises(GraphError):
        subdivide(path_graph(2), 0)


def test_disjoint_copies():
    d = disjoint_copies(subdivide(path_graph(2), 1), 3)
    assert d.n == 9 and d.m == 6
    assert len(d.components()) == 3
    assert d.label(8) == EdgeSubdivision(2, 6, 7, 1)
    assert d.label(6) == Plain(2)


def test_contract_sets():
    g = cycle_graph(6)
    h, new_of = contract_sets(g, [[0, 1], [3, 4]])
    assert h.n == 4
    assert new_of[0] == new_of[1] == 0 and new_of[3] == 1
    assert are_isomorphic(h, cycle_graph(4))
    with pytest.raises(GraphError):
        contract_sets(g, [[0, 2]])
    with pytest.raises(GraphError):
        contract_sets(g, [[0, 1], [1, 2]])
    with pytest.raises(GraphError):
        contract_sets(g, [[]])


@settings(max_examples=120, deadline=None)
@given(graphs(max_n=6), st.randoms(use_true_random=False))
def test_isomorphism_matches_permutation_oracle(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    relabelled = Graph(g.n, sorted((min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in g.edges()))
    assert are_isomorphic(g, relabelled)
    other = Graph(g.n, [e for e in g.edges()][1:])
    assert are_isomorphic(g, other) == iso_oracle(g, other)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=6), graphs(max_n=6))
def test_isomorphism_random_pairs(a, b):
    assert are_isomorphic(a, b) == iso_oracle(a, b)


def test_isomorphism_guard():
    big = cycle_graph(40)
    with pytest.raises(SizeGuardError):
        are_isomorphic(big, big)
    assert are_isomorphic(big, big, force=True)


def test_wheel_and_networkx_round_trip():
    w = wheel_graph(5)
    assert w.n == 6 and w.m == 10 and w.degree(0) == 5
    assert Graph.from_networkx(w.to_networkx()).same_edges(w)
