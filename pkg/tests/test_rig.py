import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigbench.graph import (
    Graph,
    GraphError,
    SizeGuardError,
    are_isomorphic,
    complete_graph,
    cycle_graph,
    grid_graph,
    path_graph,
    subdivide,
)
from rigbench.minors import Kind, MinorModel, find_model, verify_model
from rigbench.rig import (
    RIGRepresentation,
    canonical_subdivision_rep,
    connected_subsets,
    extract_minor_from_rig,
    find_rig_representation,
    realize,
    verify_representation,
)

from test_graph import graphs


def test_realize_small():
    host = path_graph(4)
    rep = RIGRepresentation(host, {0: {0, 1}, 1: {1, 2}, 2: {3}})
    assert sorted(realize(rep).edges()) == [(0, 1)]
    with pytest.raises(GraphError):
        realize(RIGRepresentation(host, {0: {0, 2}}))
    with pytest.raises(GraphError):
        realize(RIGRepresentation(host, {1: {0}}))


def test_verify_representation_reasons():
    host = path_graph(4)
    g = path_graph(2)
    assert verify_representation(g, RIGRepresentation(host, {0: {0, 1}, 1: {1, 2}}))
    v = verify_representation(g, RIGRepresentation(host, {0: {0}, 1: {2}}))
    assert v.reason == "missing edge"
    v = verify_representation(Graph(2, []), RIGRepresentation(host, {0: {0, 1}, 1: {1}}))
    assert v.reason == "extra edge"
    v = verify_representation(g, RIGRepresentation(host, {0: {0, 2}, 1: {2}}))
    assert v.reason == "region not connected"
    with pytest.raises(GraphError):
        verify_representation(g, RIGRepresentation(host, {0: {0}}))


def test_representation_round_trip():
    rep = canonical_subdivision_rep(cycle_graph(4))
    assert RIGRepresentation.from_dict(rep.to_dict()) == rep


@settings(max_examples=80, deadline=None)
@given(graphs(min_n=1, max_n=8))
def test_canonical_rep_realises_graph(g):
    rep = canonical_subdivision_rep(g)
    assert rep.host.same_edges(subdivide(g, 1))
    assert verify_representation(g, rep)
    assert realize(rep).same_edges(g)


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=2, max_n=7), st.data())
def test_random_regions_realise(host, data):
    # any family of connected regions is a representation of what it realises
    comps = [c for c in host.components() if c]
    k = data.draw(st.integers(1, 4))
    regions = {}
    for v in range(k):
        comp = data.draw(st.sampled_from(comps))
        size = data.draw(st.integers(1, len(comp)))
        region = {comp[0]}
        while len(region) < size:
            frontier = sorted({w for x in region for w in host.neighbors(x)} - region)
            region.add(data.draw(st.sampled_from(frontier)))
        regions[v] = region
    rep = RIGRepresentation(host, regions)
    assert verify_representation(realize(rep), rep)


def test_connected_subsets_of_path():
    subs = connected_subsets(path_graph(5), 5)
    assert len(subs) == 15
    assert connected_subsets(path_graph(5), 2) == sorted(subs[:9], key=lambda m: (bin(m).count("1"), m))


def test_rig_search_examples():
    c4 = cycle_graph(4)
    assert find_rig_representation(c4, path_graph(10)).absent
    out = find_rig_representation(c4, subdivide(c4, 1))
    assert out.found and verify_representation(c4, out.model)
    # a clique is realised by equal regions on one vertex
    assert find_rig_representation(complete_graph(4), Graph(1, [])).found
    # C4 needs a cycle in the host
    assert find_rig_representation(c4, grid_graph(2, 3)).found


def test_rig_search_region_cap_and_budget():
    c4 = cycle_graph(4)
    assert find_rig_representation(c4, subdivide(c4, 1), max_region_size=1).absent
    assert find_rig_representation(c4, path_graph(10), budget=3).unknown
    with pytest.raises(SizeGuardError):
        find_rig_representation(c4, path_graph(17))


@pytest.mark.parametrize("k", [3, 4])
def test_extraction_identity_model(k):
    h = complete_graph(k)
    g = subdivide(h, 1)
    rep = canonical_subdivision_rep(g)
    model = extract_minor_from_rig(rep, h, MinorModel(Kind.INDUCED, {v: {v} for v in g.vertices}))
    assert verify_model(h, rep.host, model)
    if k == 3:
        assert are_isomorphic(rep.host, cycle_graph(12))


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=2, max_n=5))
def test_extraction_from_found_models(h):
    # h^(1) is an induced minor of the RIG realised by any representation of h^(1) itself
    g = subdivide(h, 1)
    rep = canonical_subdivision_rep(g)
    found = find_model(g, realize(rep), Kind.INDUCED)
    assert found.found
    model = extract_minor_from_rig(rep, h, found.model)
    assert verify_model(h, rep.host, model)


def test_extraction_rejects_bad_input():
    h = complete_graph(3)
    g = subdivide(h, 1)
    rep = canonical_subdivision_rep(g)
    with pytest.raises(GraphError):
        extract_minor_from_rig(rep, h, MinorModel(Kind.ORDINARY, {v: {v} for v in g.vertices}))
    bad = {v: {v} for v in g.vertices}
    bad[0], bad[1] = {1}, {0}
    with pytest.raises(GraphError):
        extract_minor_from_rig(rep, h, MinorModel(Kind.INDUCED, bad))
