import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from rigbench.constructions import build_bn, build_bn_prime, build_g
from rigbench.graph import GraphError, complete_graph, subdivide
from rigbench.lifting import (
    Interval,
    NormalizationError,
    SubdividedCliqueModel,
    check_claims,
    intervals_of,
    lift_to_bprime,
    normalization_problems,
    normalize_model,
    subdivision_pairs,
    subdivision_vertex,
)
from rigbench.minors import Kind, MinorModel, find_model, iter_models, verify_model

G2 = build_g(2)
BP2 = build_bn_prime(1, 2)
SIZE = G2.base_size
PATH_LEN = 2 * SIZE


def P(j, pos):
    """Vertex at 1-based position ``pos`` of path ``j`` in G(2)."""
    return SIZE + (j - 1) * PATH_LEN + pos - 1


def b(i):
    return G2.b_index[i]


def span(j, lo, hi):
    return {P(j, x) for x in range(lo, hi + 1)}


def model(s, branch, subs, validate=True):
    """``branch[k]`` = X_k; ``subs[(k, k2)]`` = subdivision set."""
    assignment = {k: frozenset(v) for k, v in enumerate(branch)}
    for (k, k2), v in subs.items():
        assignment[subdivision_vertex(s, k, k2)] = frozenset(v)
    return SubdividedCliqueModel(s, MinorModel(Kind.INDUCED, assignment), G2, validate)


def test_subdivision_vertex_matches_subdivide():
    for s in range(2, 7):
        pat = subdivide(complete_graph(s), 1)
        for sv, (a, c) in subdivision_pairs(s).items():
            assert pat.neighbors(sv) == {a, c}
    with pytest.raises(GraphError):
        subdivision_vertex(3, 1, 1)


def test_model_validation():
    # b_1 and b_3 are adjacent, so X_0 and X_1 touch
    with pytest.raises(GraphError):
        model(2, [{b(1)}, {b(3)}], {(0, 1): {b(2)}})
    with pytest.raises(GraphError):
        SubdividedCliqueModel(1, MinorModel(Kind.INDUCED, {0: {0}}), G2)
    with pytest.raises(GraphError):
        SubdividedCliqueModel(2, MinorModel(Kind.INDUCED, {0: {0}}), G2)


# ---------------------------------------------------------------------------
# intervals


def test_intervals_examples():
    inside = model(2, [{b(1)}, {b(3)}], {(0, 1): {b(2)}}, validate=False)
    assert intervals_of(inside, 0) == []
    m = model(2, [span(1, 5, 7), {b(9)}], {(0, 1): {b(8)}}, validate=False)
    assert intervals_of(m, 0) == [Interval(0, 1, (3, 4))]


def two_path_fixture():
    # X_0 meets P_1 in p_{1,3}..p_{1,4} and P_2 in p_{2,3}, joined through b_3
    x0 = span(1, 5, 7) | {b(3), P(2, 5)}
    return model(2, [x0, {P(2, 7)}], {(0, 1): {P(2, 6)}})


def test_intervals_on_two_paths():
    m = two_path_fixture()
    assert intervals_of(m, 0) == [Interval(0, 1, (3, 4)), Interval(0, 2, (3,))]
    assert intervals_of(m, 1) == [Interval(1, 2, (4,))]


def test_interval_requires_consecutive_indices():
    with pytest.raises(GraphError):
        Interval(0, 1, (2, 4))
    with pytest.raises(GraphError):
        Interval(0, 1, ())


# ---------------------------------------------------------------------------
# claims


def nested_fixture():
    # I = {2,3} of X_1 inside I' = {1,2,3,4} of X_0, glued by s_{0,1} = b_2
    return model(2, [span(1, 1, 7), span(2, 3, 5)], {(0, 1): {b(2)}})


def test_nested_claim_violated():
    m = nested_fixture()
    report = check_claims(m)
    assert not report.nested
    assert report.nested.witness == {
        "I": {"owner": 1, "path": 2, "indices": [2, 3]},
        "I2": {"owner": 0, "path": 1, "indices": [1, 2, 3, 4]},
    }
    # b_2 is the only occupied b_i in the overlap and it is s_{0,1}
    assert report.nested_shared
    # witness intervals are real intervals of the model
    assert Interval(1, 2, (2, 3)) in intervals_of(m, 1)


def two_cover_fixture(extra: bool):
    if extra:
        # s_{1,2} = p_{2,3}; I = {2,..,5} inside {1,2} | {4,5} | {3}
        x1, s12, x2 = span(2, 1, 4), {P(2, 5)}, span(2, 6, 9)
    else:
        x1, s12, x2 = span(2, 1, 3), {P(2, 4)}, span(2, 5, 9)
    return model(3, [span(1, 3, 9), x1, x2], {(0, 1): {b(2)}, (0, 2): {b(5)}, (1, 2): s12})


def test_two_cover_fixtures_are_valid_models():
    for extra in (False, True):
        m = two_cover_fixture(extra)
        assert verify_model(m.pattern(), G2.graph, m.as_induced())


def test_two_cover_violated():
    report = check_claims(two_cover_fixture(False))
    assert not report.two_cover
    assert "extraIndex" not in report.two_cover.witness
    assert report.two_cover.witness["I"]["indices"] == [2, 3, 4, 5]


def test_two_cover_refinement_with_attachment_singleton():
    report = check_claims(two_cover_fixture(True))
    assert not report.two_cover
    assert report.two_cover.witness["extraIndex"] == 3


def triple_fixture():
    # I = {2,3,4} of X_0 and I' = {3,..,6} of X_1 overlap; X_2 holds p_{2,2} in the window [2, 5]
    return model(
        3,
        [span(1, 3, 7), span(2, 5, 11), {P(2, 3)}],
        {(0, 1): {b(4)}, (0, 2): {b(2)}, (1, 2): {P(2, 4)}},
    )


def test_triple_violated():
    m = triple_fixture()
    assert verify_model(m.pattern(), G2.graph, m.as_induced())
    report = check_claims(m)
    assert not report.triple
    assert report.triple.witness["third"] == 2
    assert report.triple.witness["index"] == 2


def test_claims_hold_vacuously_inside_b():
    m = model(3, [{b(1)}, {b(3)}, {b(5)}], {(0, 1): {b(2)}, (0, 2): set(), (1, 2): {b(4)}}, validate=False)
    assert check_claims(m).all_hold


def test_report_serialises():
    d = check_claims(nested_fixture()).to_dict()
    assert set(d) == {"nested", "nestedShared", "twoCover", "triple"}
    assert d["nested"]["holds"] is False


# ---------------------------------------------------------------------------
# normalisation


def test_shrink_keeps_the_degree_two_vertex():
    # s_{0,1} = {midpoint, p_{1,3}} on P_1; X_0 carries a removable extra vertex
    m = model(2, [span(1, 2, 3), span(1, 6, 7)], {(0, 1): {P(1, 4), P(1, 5)}})
    out = normalize_model(m)
    assert out.sub(0, 1) == {P(1, 4)}
    assert out.branch(0) == {P(1, 3)}
    assert out.branch(1) == {P(1, 5)}
    assert normalization_problems(out) == []
    assert verify_model(out.pattern(), G2.graph, out.as_induced())


def test_slide_off_attachment_vertex():
    m = model(2, [span(1, 3, 4), {P(1, 6)}], {(0, 1): {P(1, 5)}})
    assert normalization_problems(m)
    out = normalize_model(m)
    (w,) = out.sub(0, 1)
    assert w not in G2.path_attach.values()
    assert normalization_problems(out) == []


def test_obstruction_is_reported():
    m = model(2, [{P(1, 4)}, {P(1, 6)}], {(0, 1): {P(1, 5)}})
    with pytest.raises(NormalizationError) as info:
        normalize_model(m)
    assert "attachment" in info.value.reason
    assert verify_model(info.value.model.pattern(), G2.graph, info.value.model.as_induced())


def test_normalised_model_unchanged():
    m = normalize_model(nested_fixture())
    assert normalize_model(m) == m


def test_normalise_needs_validated_model():
    with pytest.raises(GraphError):
        normalize_model(model(2, [{b(1)}, {b(3)}], {(0, 1): {b(2)}}, validate=False))


# ---------------------------------------------------------------------------
# lifting


def test_lift_k2_inside_b():
    m = normalize_model(model(2, [{b(2)}, {b(4)}], {(0, 1): {b(1)}}))
    r = lift_to_bprime(m, BP2)
    assert r.valid and r.disjoint and r.connected and r.adjacent
    assert verify_model(complete_graph(2), BP2.graph, r.model())


def test_lift_six_cycles_in_b2():
    models = iter_models(subdivide(complete_graph(3), 1), build_bn(1, 2), Kind.INDUCED)[:300]
    assert models
    for raw in models:
        r = lift_to_bprime(normalize_model(SubdividedCliqueModel(3, raw, G2)), BP2)
        assert r.valid
        assert verify_model(complete_graph(3), BP2.graph, r.model())


def test_lift_follows_definitions():
    m = normalize_model(two_path_fixture())
    r = lift_to_bprime(m)
    # Y_0 gets b_i for every p_{j,i} in X_0 (X_0 has the smallest index, so no ties are lost)
    idx = {i for (j, i), v in G2.path_attach.items() if v in m.branch(0)}
    assert {b(i) for i in idx} <= r.y[0]
    for k in range(m.s):
        assert r.y[k] <= r.y_prime[k]


def test_lift_rejects_mismatched_bundle():
    m = normalize_model(model(2, [{b(2)}, {b(4)}], {(0, 1): {b(1)}}))
    with pytest.raises(GraphError):
        lift_to_bprime(m, build_bn_prime(1, 3))
    # G itself carries no extra edges, so it is not a B' bundle
    with pytest.raises(GraphError):
        lift_to_bprime(m, G2)


def test_lift_needs_singletons():
    m = model(2, [span(1, 2, 3), span(1, 6, 7)], {(0, 1): {P(1, 4), P(1, 5)}})
    with pytest.raises(GraphError):
        lift_to_bprime(m)


def random_found_model(seed: int, s: int):
    """An induced K_s^(1) model inside a random connected region of G(2), or None."""
    rng = random.Random(seed)
    g = G2.graph
    start = rng.randrange(SIZE, g.n)
    region = {start}
    target = rng.randint(15, 45)
    while len(region) < target:
        v = rng.choice(sorted(region))
        region.add(rng.choice(sorted(g.neighbors(v))))
    sub, old = g.induced_subgraph(sorted(region))
    out = find_model(subdivide(complete_graph(s), 1), sub, Kind.INDUCED, budget=20000)
    if not out.found:
        return None
    assignment = {p: frozenset(old[x] for x in xs) for p, xs in out.model.assignment.items()}
    return SubdividedCliqueModel(s, MinorModel(Kind.INDUCED, assignment), G2)


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 4]))
def test_pipeline_properties(seed, s):
    m = random_found_model(seed, s)
    if m is None:
        return
    try:
        nm = normalize_model(m)
    except NormalizationError:
        return
    assert normalize_model(nm) == nm
    assert verify_model(nm.pattern(), G2.graph, nm.as_induced())
    r = lift_to_bprime(nm, BP2)
    claimed = {}
    clash = False
    for k in range(s):
        for i in {i for (j, i), v in G2.path_attach.items() if v in nm.branch(k)} | {
            i for i, v in G2.b_index.items() if v in nm.branch(k)
        }:
            if claimed.setdefault(i, k) != k:
                clash = True
    if not clash:
        assert r.disjoint
    if r.valid:
        assert verify_model(complete_graph(s), BP2.graph, r.model())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_k6_fixtures_lift_or_fail_verification(seed):
    # explicit-vertex-list fixtures for s = 6: any that verify and pass the claims must lift
    rng = random.Random(seed)
    g = G2.graph
    verts = list(range(g.n))
    rng.shuffle(verts)
    pattern_size = 6 + 15
    assignment = {p: frozenset([verts[p]]) for p in range(pattern_size)}
    m = SubdividedCliqueModel(6, MinorModel(Kind.INDUCED, assignment), G2, validate=False)
    ok = verify_model(m.pattern(), g, m.as_induced())
    if ok and check_claims(m).all_hold:
        assert lift_to_bprime(m, BP2).valid
    else:
        assert not ok or not check_claims(m).all_hold
