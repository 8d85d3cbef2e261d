"""The verification battery behind ``rigbench paper-suite`` and the acceptance tests.

Each check returns a ``CheckResult``.  Level "full" runs the stated
workloads; "fast" shrinks the expensive ones (smaller corpora, smaller
budgets) so the whole battery takes well under a minute.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Callable

import networkx as nx

from .constructions import (
    apex_grid,
    base_vertex_count,
    build_bn,
    build_bn_prime,
    build_g,
    build_gg,
    check_bprime_contract,
    pd_collapse_parts,
    pd_grid,
)
from .graph import (
    Graph,
    are_isomorphic,
    complete_graph,
    contract_sets,
    cycle_graph,
    girth,
    path_graph,
    subdivide,
)
from .lifting import SubdividedCliqueModel, lift_to_bprime, normalize_model
from .minors import Kind, MinorModel, brute_force_contains, find_model, iter_models, verify_model
from .rig import canonical_subdivision_rep, extract_minor_from_rig, find_rig_representation
from .treedec import TreeDecomposition, clique_sum, helly_common_node, is_tree, torso, verify_td

LEVELS = ("fast", "full")


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    detail: str


@dataclass(frozen=True)
class Check:
    number: int
    name: str
    run: Callable[[str], CheckResult]


def _level(level: str) -> str:
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    return level


def check_counts(level: str) -> CheckResult:
    facts = []
    b = build_bn(1, 2)
    facts.append(("B_{1,2}", (b.n, b.m), (26, 32)))
    g = build_g(2).graph
    facts.append(("G(2)", (g.n, g.m), (130, 186)))
    for gg in (2, 3):
        got = build_gg(gg, 2).graph.n
        facts.append((f"G_{{{gg},2}}", got, base_vertex_count(2, gg) * (1 + 2 * gg)))
        facts.append((f"|B_{{{gg},2}}|", build_bn(gg, 2).n, base_vertex_count(2, gg)))
    bad = [f"{name}: {got} != {want}" for name, got, want in facts if got != want]
    return CheckResult(not bad, "; ".join(bad) or f"{len(facts)} counts match")


def check_girth(level: str) -> CheckResult:
    facts = []
    for n in (2, 3):
        facts.append((f"girth G({n})", girth(build_g(n).graph), "==", 5))
    for gg in (1, 2, 3):
        facts.append((f"girth B_{{{gg},2}}", girth(build_bn(gg, 2)), "==", 3 * (gg + 1)))
    top = 8 if level == "full" else 6
    for gg in range(5, top + 1):
        facts.append((f"girth G_{{{gg},2}}", girth(build_gg(gg, 2).graph), ">=", gg))
    bad = []
    for name, got, op, want in facts:
        ok = got == want if op == "==" else (isinstance(got, int) and got >= want)
        if not ok:
            bad.append(f"{name} = {got}, want {op} {want}")
    return CheckResult(not bad, "; ".join(bad) or ", ".join(f"{f[0]}={f[1]}" for f in facts))


def check_bprime(level: str) -> CheckResult:
    problems = []
    for n in (2, 3):
        bundle = build_bn_prime(1, n)
        problems += [f"n={n}: {p}" for p in check_bprime_contract(build_bn(1, n), bundle)]
    budget = 10**8 if level == "full" else 10**6
    out = find_model(complete_graph(6), build_bn_prime(1, 2).graph, Kind.ORDINARY, budget=budget)
    if not out.absent:
        problems.append(f"K6 in B'_2: {out} after {out.nodes} nodes")
    return CheckResult(
        not problems, "; ".join(problems) or f"H1-H4 hold; K6 in B'_2 Absent ({out.nodes} nodes)"
    )


def check_apex(level: str) -> CheckResult:
    problems = []
    sizes = (2, 3, 4) if level == "full" else (2, 3)
    nodes = []
    for n in sizes:
        out = find_model(complete_graph(6), apex_grid(n), Kind.ORDINARY)
        nodes.append(out.nodes)
        if not out.absent:
            problems.append(f"K6 in A{n}: {out}")
    out = find_model(complete_graph(5), apex_grid(3), Kind.ORDINARY)
    if not out.found:
        problems.append(f"K5 in A3: {out}")
    detail = f"K6 Absent in A{list(sizes)} (nodes {nodes}); K5 Found in A3"
    return CheckResult(not problems, "; ".join(problems) or detail)


SOLVER_PATTERNS = {
    "K3": complete_graph(3),
    "K4": complete_graph(4),
    "C4": cycle_graph(4),
    "P4": path_graph(4),
    "K5": complete_graph(5),
}


def connected_hosts(max_n: int) -> list[Graph]:
    """Every connected graph on 1..max_n vertices (max_n <= 7), one per isomorphism class."""
    if max_n > 7:
        raise ValueError("the graph atlas stops at 7 vertices")
    return [
        Graph.from_networkx(h)
        for h in nx.graph_atlas_g()
        if 1 <= h.number_of_nodes() <= max_n and nx.is_connected(h)
    ]


def check_solver_oracle(level: str) -> CheckResult:
    hosts = connected_hosts(7 if level == "full" else 6)
    total = 0
    bad = []
    for host in hosts:
        for pname, pattern in SOLVER_PATTERNS.items():
            for kind in Kind:
                total += 1
                got = find_model(pattern, host, kind).found
                want = brute_force_contains(pattern, host, kind)
                if got != want:
                    bad.append(f"{pname} {kind.value} in {sorted(host.edges())}")
    detail = f"{total - len(bad)}/{total} agree over {len(hosts)} hosts"
    return CheckResult(not bad, detail + ("; first mismatch " + bad[0] if bad else ""))


def _lee_case(k: int) -> str | None:
    h = complete_graph(k)
    g = subdivide(h, 1)
    rep = canonical_subdivision_rep(g)
    identity = MinorModel(Kind.INDUCED, {v: {v} for v in g.vertices})
    out = extract_minor_from_rig(rep, h, identity)
    verdict = verify_model(h, rep.host, out)
    return None if verdict else f"K{k}: {verdict.reason}"


def check_lee(level: str) -> CheckResult:
    problems = []
    host6 = canonical_subdivision_rep(subdivide(complete_graph(3), 1)).host
    if not are_isomorphic(host6, cycle_graph(12)):
        problems.append("host for K3^(1) is not C12")
    for k in (3, 4):
        p = _lee_case(k)
        if p:
            problems.append(p)
    return CheckResult(not problems, "; ".join(problems) or "K3 model in C12 and K4 model verified")


def check_rig_search(level: str) -> CheckResult:
    c4 = cycle_graph(4)
    a = find_rig_representation(c4, path_graph(10))
    b = find_rig_representation(c4, subdivide(c4, 1))
    ok = a.absent and b.found
    return CheckResult(ok, f"C4 over P10: {a}; C4 over C4^(1): {b}")


def check_pd_collapse(level: str) -> CheckResult:
    bad = []
    for n in (2, 3):
        bundle = build_g(n)
        collapsed, _ = contract_sets(bundle.graph, pd_collapse_parts(bundle))
        if not are_isomorphic(collapsed, pd_grid(n)):
            bad.append(f"n={n}")
    return CheckResult(not bad, "not isomorphic for " + ", ".join(bad) if bad else "n=2,3 isomorphic")


def check_lifting(level: str) -> CheckResult:
    pattern = subdivide(complete_graph(3), 1)
    models = iter_models(pattern, build_bn(1, 2), Kind.INDUCED)
    if level == "fast":
        models = models[:200]
    g_bundle = build_g(2)
    bprime = build_bn_prime(1, 2)
    bad = 0
    first = None
    for raw in models:
        m = normalize_model(SubdividedCliqueModel(3, raw, g_bundle))
        result = lift_to_bprime(m, bprime)
        if not (result.valid and verify_model(complete_graph(3), bprime.graph, result.model())):
            bad += 1
            first = first or result.verdict.reason
    ok = bool(models) and bad == 0
    detail = f"{len(models) - bad}/{len(models)} models lifted to verified K3 models in B'_2"
    return CheckResult(ok, detail + (f"; first failure: {first}" if first else ""))


def check_k6_induced(level: str) -> CheckResult:
    budget = 10**8 if level == "full" else 10**5
    pattern = subdivide(complete_graph(6), 1)
    out = find_model(pattern, build_g(2).graph, Kind.INDUCED, budget=budget)
    return CheckResult(not out.found, f"{out} after {out.nodes} nodes (budget {budget})")


def td_fixture_failures() -> list[str]:
    """Hand-computed tree-decomposition facts (vertices renumbered from 0)."""
    bad = []
    p4 = path_graph(4)
    path3 = path_graph(3)
    td = TreeDecomposition(path3, {0: {0, 1}, 1: {1, 2}, 2: {2, 3}})
    v = verify_td(p4, td)
    if not (v and v.width == 1 and v.adhesion == 1):
        bad.append(f"P4 path bags: {v}")
    k5 = complete_graph(5)
    v = verify_td(k5, TreeDecomposition(Graph(1, []), {0: set(range(5))}))
    if not (v and v.width == 4 and v.adhesion == 0):
        bad.append(f"single bag: {v}")
    edge = Graph(4, [(1, 2)])
    v = verify_td(edge, TreeDecomposition(path_graph(2), {0: {0, 1}, 1: {2, 3}}))
    if v or v.reason != "uncovered edge":
        bad.append(f"uncovered edge not reported: {v}")
    # star with centre 0 and leaves 1, 2, 3; bags {0,1},{0,2},{0,3} on a path
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    td = TreeDecomposition(path3, {0: {0, 1}, 1: {0, 2}, 2: {0, 3}})
    t, keep = torso(star, td, 1)
    induced, _ = star.induced_subgraph(sorted(td.bags[1]))
    if not t.same_edges(induced):
        bad.append("star middle torso differs from induced subgraph")
    t, _ = torso(star, td, 0)
    induced, _ = star.induced_subgraph(sorted(td.bags[0]))
    if not t.same_edges(induced):
        bad.append("star leaf torso differs from induced subgraph")
    c4 = cycle_graph(4)  # 0-1-2-3-0; bags {0,1,3},{1,2,3}
    td = TreeDecomposition(path_graph(2), {0: {0, 1, 3}, 1: {1, 2, 3}})
    for node in (0, 1):
        t, _ = torso(c4, td, node)
        if not t.same_edges(complete_graph(3)):
            bad.append(f"C4 torso {node} is not a triangle")
    v = verify_td(c4, td)
    if not (v and v.width == 2 and v.adhesion == 2):
        bad.append(f"C4 decomposition: {v}")
    tri = complete_graph(3)
    diamond = clique_sum(tri, [0, 1], tri, [0, 1])
    if (diamond.n, diamond.m) != (4, 5):
        bad.append(f"diamond: {diamond.n}/{diamond.m}")
    p3 = clique_sum(path_graph(2), [1], path_graph(2), [0])
    if not are_isomorphic(p3, path_graph(3)):
        bad.append("1-sum of K2 and K2 is not P3")
    c4sum = clique_sum(tri, [0, 1], tri, [0, 1], drop_edges=[(0, 1)])
    if not are_isomorphic(c4sum, cycle_graph(4)):
        bad.append("2-sum dropping the shared edge is not C4")
    p5 = path_graph(5)  # nodes 0..4 stand for 1..5
    if helly_common_node(p5, [{0, 1, 2}, {1, 2, 3}, {2, 3, 4}]) != (2, None):
        bad.append("Helly on path 1..5 did not return node 3")
    node, witness = helly_common_node(p5, [{0}, {4}])
    if node is not None or witness != (0, 1):
        bad.append("Helly did not report disjoint {1},{5}")
    node, _ = helly_common_node(p5, [{1, 2}])
    if node not in (1, 2):
        bad.append("Helly single subtree")
    return bad


def subtrees_of(tree: Graph) -> list[frozenset[int]]:
    """Every connected non-empty node subset of ``tree``."""
    out = set()
    layer = {frozenset([v]) for v in tree.vertices}
    while layer:
        out |= layer
        nxt = set()
        for s in layer:
            for v in s:
                for w in tree.neighbors(v):
                    if w not in s:
                        nxt.add(s | {w})
        layer = nxt - out
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def helly_exhaustive(max_nodes: int) -> tuple[int, int]:
    """Compare helly_common_node with direct intersection on every subtree triple.

    Returns ``(cases, mismatches)``; covers every tree on at most
    ``max_nodes`` nodes up to isomorphism (which includes every path).
    """
    cases = 0
    bad = 0
    for size in range(1, max_nodes + 1):
        for t in nx.nonisomorphic_trees(size) if size > 1 else [nx.empty_graph(1)]:
            tree = Graph.from_networkx(nx.convert_node_labels_to_integers(t))
            subs = subtrees_of(tree)
            # validate once here so the inner loop exercises only the search
            if not is_tree(tree) or not all(tree.is_connected_set(s) for s in subs):
                bad += 1
                continue
            for triple in combinations_with_replacement(subs, 3):
                sets = list(triple)
                cases += 1
                node, witness = helly_common_node(tree, sets, check=False)
                common = sets[0] & sets[1] & sets[2]
                if common:
                    ok = node in common and witness is None
                else:
                    a, b = witness if witness else (0, 0)
                    ok = node is None and witness is not None and not (sets[a] & sets[b])
                if not ok:
                    bad += 1
    return cases, bad


def check_treedec(level: str) -> CheckResult:
    bad = td_fixture_failures()
    cases, mismatches = helly_exhaustive(8 if level == "full" else 6)
    if mismatches:
        bad.append(f"Helly: {mismatches} mismatches")
    return CheckResult(not bad, "; ".join(bad) or f"fixtures agree; Helly exhaustive over {cases} triples")


CHECKS = (
    Check(1, "construction counts", check_counts),
    Check(2, "girth", check_girth),
    Check(3, "B' contract and K6-minor-freeness", check_bprime),
    Check(4, "apex grids", check_apex),
    Check(5, "solver vs brute force", check_solver_oracle),
    Check(6, "RIG minor extraction", check_lee),
    Check(7, "RIG search", check_rig_search),
    Check(8, "PD-grid collapse", check_pd_collapse),
    Check(9, "lifting K3^(1) models", check_lifting),
    Check(10, "no induced K6^(1) in G(2)", check_k6_induced),
    Check(11, "tree decompositions", check_treedec),
)


def run_check(number: int, level: str) -> tuple[CheckResult, float]:
    _level(level)
    check = CHECKS[number - 1]
    start = time.perf_counter()
    try:
        res = check.run(level)
    except Exception as exc:  # a crash is a failure, reported like one
        res = CheckResult(False, f"error: {type(exc).__name__}: {exc}")
    return res, time.perf_counter() - start


def _run_one(args):
    number, level = args
    return run_check(number, level)


def run_suite(level: str = "fast", only=None, jobs: int = 1):
    """Run the battery; returns ``[(check, result, seconds)]`` in check order."""
    _level(level)
    chosen = [c for c in CHECKS if only is None or c.number in only]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(jobs, os.cpu_count() or 1)) as pool:
            outs = list(pool.map(_run_one, [(c.number, level) for c in chosen]))
    else:
        outs = [run_check(c.number, level) for c in chosen]
    return [(c, res, secs) for c, (res, secs) in zip(chosen, outs)]
