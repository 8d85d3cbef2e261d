"""Exact minor and induced-minor search.

Models are found by growing branch sets from seeds.  Each branch set is
seeded at its minimum vertex; afterwards every step picks an unsatisfied
pattern edge ``uv`` and a frontier vertex ``w`` of ``X_u`` (or ``X_v``) and
branches on "``w`` joins the set" versus "``w`` is barred from that set".
The two branches partition the remaining models, so exhausting the tree is
a proof of absence.  Host graphs are handled as integer bitsets.

``brute_force_contains`` is an independent check that enumerates every
partition of a vertex subset into connected blocks; it is only meant for
hosts of at most ten vertices.
"""

from __future__ import annotations

import enum
import sys
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterator, Mapping

import networkx as nx

from .graph import Graph, GraphError, SizeGuardError


class Kind(str, enum.Enum):
    ORDINARY = "ordinary"
    INDUCED = "induced"


class Status(str, enum.Enum):
    FOUND = "found"
    ABSENT = "absent"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class MinorModel:
    """Branch sets ``assignment[p]`` in the host for every pattern vertex ``p``."""

    kind: Kind
    assignment: Mapping[int, frozenset[int]]

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(
            self, "assignment", {int(p): frozenset(s) for p, s in sorted(self.assignment.items())}
        )

    def branch(self, p: int) -> frozenset[int]:
        return self.assignment[p]

    def used(self) -> frozenset[int]:
        out: set[int] = set()
        for s in self.assignment.values():
            out |= s
        return frozenset(out)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "assignment": {str(p): sorted(s) for p, s in self.assignment.items()},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "MinorModel":
        return cls(Kind(data["kind"]), {int(p): frozenset(s) for p, s in data["assignment"].items()})


@dataclass(frozen=True)
class Verdict:
    """Outcome of a verification: truthy iff ``ok``; ``reason`` names the first failure."""

    ok: bool
    reason: str | None = None
    detail: str | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class SearchOutcome:
    status: Status
    model: object | None = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND

    @property
    def absent(self) -> bool:
        return self.status is Status.ABSENT

    @property
    def unknown(self) -> bool:
        return self.status is Status.UNKNOWN

    def __str__(self) -> str:
        return {Status.FOUND: "Found", Status.ABSENT: "Absent", Status.UNKNOWN: "Unknown"}[
            self.status
        ]


# ---------------------------------------------------------------------------
# verification


def verify_model(pattern: Graph, host: Graph, model: MinorModel) -> Verdict:
    """Check that ``model`` is a (possibly induced) minor model of pattern in host.

    Raises ``GraphError`` when the assignment does not cover exactly the
    pattern's vertices.
    """
    if set(model.assignment) != set(pattern.vertices):
        raise GraphError("model assignment must cover exactly the pattern vertices")
    owner: dict[int, int] = {}
    for p in pattern.vertices:
        xs = model.assignment[p]
        if not xs:
            return Verdict(False, "empty branch set", f"pattern vertex {p}")
        for x in xs:
            if not 0 <= x < host.n:
                return Verdict(False, "unknown host vertex", f"{x} in branch set {p}")
            if x in owner:
                return Verdict(False, "disjointness", f"host vertex {x} in {owner[x]} and {p}")
            owner[x] = p
    for p in pattern.vertices:
        if not host.is_connected_set(model.assignment[p]):
            return Verdict(False, "connectivity", f"branch set {p}")
    adjacent: set[tuple[int, int]] = set()
    for u, v in host.edges():
        pu, pv = owner.get(u), owner.get(v)
        if pu is not None and pv is not None and pu != pv:
            adjacent.add((min(pu, pv), max(pu, pv)))
    for e in pattern.edges():
        if e not in adjacent:
            return Verdict(False, "edge adjacency", f"branch sets {e[0]} and {e[1]}")
    if model.kind is Kind.INDUCED:
        for a, b in sorted(adjacent):
            if not pattern.has_edge(a, b):
                return Verdict(False, "non-edge adjacency", f"branch sets {a} and {b}")
    return Verdict(True)


# ---------------------------------------------------------------------------
# bit helpers


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _to_mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class _BudgetExhausted(Exception):
    pass


class _Found(Exception):
    def __init__(self, sets):
        self.sets = sets


# ---------------------------------------------------------------------------
# the search


def _transposition_extends(g: nx.Graph, a: int, b: int, fixed) -> bool:
    """Is there an automorphism swapping ``a`` and ``b`` and fixing every vertex in ``fixed``?"""
    left = {v: ("x", v) if v in fixed else ("o",) for v in g}
    right = dict(left)
    left[a], left[b] = ("a",), ("b",)
    right[a], right[b] = ("b",), ("a",)
    nx.set_node_attributes(g, left, "c1")
    nx.set_node_attributes(g, right, "c2")
    gm = nx.algorithms.isomorphism.GraphMatcher(
        g, g, node_match=lambda x, y: x["c1"] == y["c2"]
    )
    return gm.is_isomorphic()


def symmetry_chain(pattern: Graph, order: list[int]) -> list[int]:
    """For each search position, an earlier position whose seed must be smaller (or -1).

    Two kinds of constraint are combined.  One class ``C`` of pattern
    vertices on which the automorphism group acts as the full symmetric
    group (every transposition extends to an automorphism fixing the rest
    of ``C``) is seeded in increasing order; so is every class of true
    twins (equal open or closed neighbourhoods) disjoint from ``C``, whose
    permutations fix everything else.  Any model can be relabelled by one
    automorphism to satisfy all of these at once.
    """
    k = pattern.n
    g = pattern.to_networkx()
    classes: list[list[int]] = []
    for p in order:
        for cls in classes:
            if pattern.degree(cls[0]) != pattern.degree(p):
                continue
            trial = cls + [p]
            if all(
                _transposition_extends(g, trial[t], trial[t + 1], set(trial) - {trial[t], trial[t + 1]})
                for t in range(len(trial) - 1)
            ):
                cls.append(p)
                break
        else:
            classes.append([p])
    main = max(classes, key=len)
    pos = {p: i for i, p in enumerate(order)}
    before = [-1] * k
    if len(main) > 1:
        for a, b in zip(main, main[1:]):
            before[pos[b]] = pos[a]
    in_main = set(main) if len(main) > 1 else set()
    twins: dict[tuple, list[int]] = {}
    for p in order:
        if p in in_main:
            continue
        nb = pattern.neighbors(p)
        for key in (("open", frozenset(nb)), ("closed", frozenset(nb | {p}))):
            twins.setdefault(key, []).append(p)
    for members in twins.values():
        for a, b in zip(members, members[1:]):
            before[pos[b]] = pos[a]
    return before


class _Search:
    """Branch-set growth search of one pattern in one host.

    ``counter`` is a one-element list so that several searches (one per
    block of a reduced host) share a node budget.
    """

    def __init__(self, pattern: Graph, host: Graph, kind: Kind, budget, counter):
        self.k = pattern.n
        self.n = host.n
        self.induced = kind is Kind.INDUCED
        self.budget = budget
        self.counter = counter
        self.hm = host.masks
        self.full = (1 << host.n) - 1
        order = sorted(pattern.vertices, key=lambda p: (-pattern.degree(p), p))
        self.order = order
        pos = {p: i for i, p in enumerate(order)}
        # relabel pattern vertices by search position
        self.pos_to_pattern = order
        self.padj = [0] * self.k
        for a, b in pattern.edges():
            self.padj[pos[a]] |= 1 << pos[b]
            self.padj[pos[b]] |= 1 << pos[a]
        self.pedges = sorted(
            (min(pos[a], pos[b]), max(pos[a], pos[b])) for a, b in pattern.edges()
        )
        allp = (1 << self.k) - 1
        self.nonadj = [allp & ~self.padj[i] & ~(1 << i) for i in range(self.k)]
        # interchangeable pattern vertices are seeded in increasing host order
        self.sym_before = symmetry_chain(pattern, order)
        # bits strictly above v
        self.above = [self.full & ~((1 << (v + 1)) - 1) for v in range(host.n)]
        self.seeds = [0] * self.k

    def tick(self):
        self.counter[0] += 1
        if self.budget is not None and self.counter[0] > self.budget:
            raise _BudgetExhausted

    def nbr(self, mask: int) -> int:
        hm = self.hm
        out = 0
        while mask:
            low = mask & -mask
            out |= hm[low.bit_length() - 1]
            mask ^= low
        return out

    def reach(self, start: int, nstart: int, allowed: int) -> tuple[int, int]:
        """Closure of ``start`` through ``allowed`` vertices, with its neighbourhood."""
        region = start
        nreg = nstart
        front = nstart & allowed & ~region
        hm = self.hm
        while front:
            region |= front
            while front:
                low = front & -front
                nreg |= hm[low.bit_length() - 1]
                front ^= low
            front = nreg & allowed & ~region
        return region, nreg

    def feasible(self, X, NX, AL, used, active: int) -> bool:
        """Necessary condition: every unsatisfied edge among ``active`` can still be realised."""
        free = self.full & ~used
        regions = {}
        for u, v in self.pedges:
            if not (active >> u & 1 and active >> v & 1):
                continue
            if NX[u] & X[v]:
                continue
            if u not in regions:
                regions[u] = self.reach(X[u], NX[u], AL[u] & free)
            if v not in regions:
                regions[v] = self.reach(X[v], NX[v], AL[v] & free)
            if not regions[u][1] & regions[v][0]:
                return False
        return True

    def add(self, X, NX, AL, i: int, w: int) -> None:
        bit = 1 << w
        X[i] |= bit
        NX[i] |= self.hm[w]
        if self.induced:
            block = ~(self.hm[w] | bit)
            for x in _bits(self.nonadj[i]):
                AL[x] &= block

    # -- seeding -----------------------------------------------------------

    def run(self):
        X = [0] * self.k
        NX = [0] * self.k
        AL = [self.full] * self.k
        self.seed(0, X, NX, AL, 0)

    def seed(self, idx, X, NX, AL, used):
        if idx == self.k:
            self.grow(X, NX, AL, used)
            return
        cand = AL[idx] & ~used
        tb = self.sym_before[idx]
        if tb >= 0:
            cand &= self.above[self.seeds[tb]]
        active = (1 << (idx + 1)) - 1
        for s in _bits(cand):
            self.tick()
            X2, NX2, AL2 = X[:], NX[:], AL[:]
            self.add(X2, NX2, AL2, idx, s)
            AL2[idx] &= self.above[s]
            used2 = used | (1 << s)
            free = self.full & ~used2
            if any(not (AL2[j] & free) for j in range(idx + 1, self.k)):
                continue
            if not self.feasible(X2, NX2, AL2, used2, active):
                continue
            self.seeds[idx] = s
            self.seed(idx + 1, X2, NX2, AL2, used2)

    # -- growth ------------------------------------------------------------

    def grow(self, X, NX, AL, used):
        self.tick()
        free = self.full & ~used
        regions = {}
        best = None
        best_count = None
        for u, v in self.pedges:
            if NX[u] & X[v]:
                continue
            if u not in regions:
                regions[u] = self.reach(X[u], NX[u], AL[u] & free)
            if v not in regions:
                regions[v] = self.reach(X[v], NX[v], AL[v] & free)
            if not regions[u][1] & regions[v][0]:
                return
            cu = NX[u] & AL[u] & free
            cv = NX[v] & AL[v] & free
            count = bin(cu).count("1") + bin(cv).count("1")
            if best is None or count < best_count:
                best, best_count = (u, v, cu, cv), count
        if best is None:
            raise _Found(X)
        u, v, cu, cv = best
        # prefer a candidate that is directly adjacent to the other side
        direct_u = cu & NX[v]
        direct_v = cv & NX[u]
        if direct_u:
            side, cand = u, direct_u
        elif direct_v:
            side, cand = v, direct_v
        elif cu:
            side, cand = u, cu
        else:
            side, cand = v, cv
        w = (cand & -cand).bit_length() - 1
        bit = 1 << w
        X2, NX2, AL2 = X[:], NX[:], AL[:]
        self.add(X2, NX2, AL2, side, w)
        self.grow(X2, NX2, AL2, used | bit)
        AL3 = AL[:]
        AL3[side] &= ~bit
        self.grow(X, NX, AL3, used)

    def model_sets(self, X) -> dict[int, frozenset[int]]:
        return {self.pos_to_pattern[i]: frozenset(_bits(X[i])) for i in range(self.k)}


class _Enumerate(_Search):
    """Same tree, but yields every leaf model instead of stopping at the first."""

    def __init__(self, *args):
        super().__init__(*args)
        self.found = []

    def grow(self, X, NX, AL, used):
        try:
            super().grow(X, NX, AL, used)
        except _Found as hit:
            self.found.append(self.model_sets(hit.sets))


def _compiled_available() -> bool:
    try:
        from . import _core  # noqa: F401
    except ImportError:
        return False
    return True


def _resolve_engine(engine: str) -> str:
    if engine not in ("auto", "python", "compiled"):
        raise ValueError(f"unknown engine {engine!r}")
    if engine == "auto":
        return "compiled" if _compiled_available() else "python"
    if engine == "compiled" and not _compiled_available():
        raise RuntimeError("compiled engine needs numba")
    return engine


def _words(mask: int, w: int):
    return [(mask >> (64 * j)) & 0xFFFFFFFFFFFFFFFF for j in range(w)]


def _run_compiled(search: _Search, budget, enumerate_all: bool = False, max_found: int = 1):
    """Run ``search``'s tree in the compiled core.

    Returns ``(status, nodes, list of X vectors)`` where status is one of
    "found", "absent", "budget".
    """
    import numpy as np

    from . import _core

    n, k = search.n, search.k
    w = max(1, (n + 63) // 64)
    hm = np.array([_words(m, w) for m in search.hm], dtype=np.uint64).reshape(n, w)
    fullw = np.array(_words(search.full, w), dtype=np.uint64)
    pe_u = np.array([u for u, _ in search.pedges], dtype=np.int64)
    pe_v = np.array([v for _, v in search.pedges], dtype=np.int64)
    nonadj = np.zeros((k, k), dtype=np.bool_)
    for i in range(k):
        for x in _bits(search.nonadj[i]):
            nonadj[i, x] = True
    sym = np.array(search.sym_before, dtype=np.int64)
    b = -1 if budget is None else int(budget)
    res, nodes, count, sets = _core.search(
        hm, fullw, k, pe_u, pe_v, nonadj, sym, search.induced, b, enumerate_all, max_found
    )
    status = {_core.RESULT_ABSENT: "absent", _core.RESULT_FOUND: "found", _core.RESULT_BUDGET: "budget"}[
        int(res)
    ]
    out = []
    for f in range(min(int(count), max_found)):
        X = []
        for i in range(k):
            m = 0
            for j in range(w):
                m |= int(sets[f, i, j]) << (64 * j)
            X.append(m)
        out.append(X)
    return status, int(nodes), out, int(count)


def _min_degree(g: Graph) -> int:
    return min((g.degree(v) for v in g.vertices), default=0)


def _reduce(host: Graph, reps: list[frozenset[int]], min_deg: int):
    """Delete degree <= 1 vertices and (if ``min_deg >= 3``) suppress degree-2 vertices.

    ``reps[v]`` is the set of original vertices that host vertex ``v`` stands for.
    """
    adj = {v: set(host.neighbors(v)) for v in host.vertices}
    rep = {v: set(reps[v]) for v in host.vertices}
    changed = True
    while changed:
        changed = False
        for v in sorted(adj):
            if v not in adj:
                continue
            d = len(adj[v])
            if d <= 1 and min_deg >= 2:
                for w in adj[v]:
                    adj[w].discard(v)
                del adj[v]
                del rep[v]
                changed = True
            elif d == 2 and min_deg >= 3:
                a, b = sorted(adj[v])
                adj[a].discard(v)
                adj[b].discard(v)
                if b in adj[a]:
                    del rep[v]
                else:
                    adj[a].add(b)
                    adj[b].add(a)
                    rep[a] |= rep.pop(v)
                del adj[v]
                changed = True
    keep = sorted(adj)
    index = {v: i for i, v in enumerate(keep)}
    edges = {(min(index[u], index[w]), max(index[u], index[w])) for u in keep for w in adj[u]}
    return Graph(len(keep), sorted(edges)), [frozenset(rep[v]) for v in keep]


def _pieces(pattern: Graph, host: Graph):
    """Reduced sub-hosts that together contain every ordinary model of ``pattern``.

    Yields ``(subhost, reps)``; a model found in a sub-host maps back by
    replacing each vertex with its represented set.
    """
    min_deg = _min_degree(pattern)
    two_connected = pattern.n >= 3 and nx.is_biconnected(pattern.to_networkx())
    stack = [(host, [frozenset([v]) for v in host.vertices])]
    while stack:
        g, reps = stack.pop()
        g, reps = _reduce(g, reps, min_deg)
        if g.n < pattern.n:
            continue
        if two_connected:
            blocks = [
                sorted(b)
                for b in nx.biconnected_components(g.to_networkx())
                if len(b) >= pattern.n
            ]
            if len(blocks) != 1 or len(blocks[0]) != g.n:
                for b in sorted(blocks, reverse=True):
                    sub, old = g.induced_subgraph(b)
                    stack.append((sub, [reps[v] for v in old]))
                continue
        yield g, reps


def find_model(
    pattern: Graph,
    host: Graph,
    kind: Kind | str = Kind.ORDINARY,
    budget: int | None = None,
    reduce: bool = True,
    engine: str = "auto",
) -> SearchOutcome:
    """Search for a minor (or induced minor) model of ``pattern`` in ``host``.

    ``budget`` caps the number of search nodes (one node per seed candidate
    tried and one per growth step); running out yields an ``Unknown``
    outcome, never ``Absent``.  For ordinary minors the host is first
    reduced (leaves dropped, degree-2 vertices suppressed when the pattern
    has minimum degree 3, split into blocks when the pattern is
    2-connected); all of these preserve containment.

    ``engine`` is "python", "compiled" (numba) or "auto".  Both engines walk
    the same tree and report the same node counts.
    """
    kind = Kind(kind)
    engine = _resolve_engine(engine)
    if pattern.n == 0 or host.n == 0:
        raise GraphError("pattern and host must be non-empty")
    counter = [0]
    if pattern.n > host.n:
        return SearchOutcome(Status.ABSENT, None, 0)
    if kind is Kind.ORDINARY and reduce:
        pieces = list(_pieces(pattern, host))
    else:
        pieces = [(host, [frozenset([v]) for v in host.vertices])]
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20000))
    try:
        for sub, reps in pieces:
            search = _Search(pattern, sub, kind, budget, counter)
            hit_sets = None
            if engine == "compiled":
                left = None if budget is None else budget - counter[0]
                status, nodes, found, _ = _run_compiled(search, left)
                counter[0] += nodes
                if status == "budget":
                    raise _BudgetExhausted
                if status == "found":
                    hit_sets = found[0]
            else:
                try:
                    search.run()
                except _Found as hit:
                    hit_sets = hit.sets
            if hit_sets is not None:
                sets = search.model_sets(hit_sets)
                model = MinorModel(
                    kind, {p: frozenset().union(*(reps[x] for x in s)) for p, s in sets.items()}
                )
                verdict = verify_model(pattern, host, model)
                if not verdict:
                    raise AssertionError(f"search produced an invalid model: {verdict}")
                return SearchOutcome(Status.FOUND, model, counter[0])
    except _BudgetExhausted:
        return SearchOutcome(Status.UNKNOWN, None, counter[0])
    finally:
        sys.setrecursionlimit(limit)
    return SearchOutcome(Status.ABSENT, None, counter[0])


def iter_models(
    pattern: Graph,
    host: Graph,
    kind: Kind | str = Kind.INDUCED,
    budget: int | None = None,
    engine: str = "auto",
    max_models: int = 100000,
) -> list[MinorModel]:
    """Every model at a leaf of the (unreduced) search tree, in search order.

    These are the models the solver can return; they are pairwise distinct.
    Raises ``SizeGuardError`` if ``budget`` runs out before the tree is done
    or more than ``max_models`` models turn up.
    """
    kind = Kind(kind)
    engine = _resolve_engine(engine)
    counter = [0]
    if engine == "compiled":
        search = _Search(pattern, host, kind, budget, counter)
        status, _, found, count = _run_compiled(search, budget, True, max_models)
        if status == "budget":
            raise SizeGuardError(f"model enumeration exceeded {budget} nodes")
        if count > max_models:
            raise SizeGuardError(f"more than {max_models} models")
        raw = [search.model_sets(X) for X in found]
    else:
        search = _Enumerate(pattern, host, kind, budget, counter)
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 20000))
        try:
            search.run()
        except _BudgetExhausted as exc:
            raise SizeGuardError(f"model enumeration exceeded {budget} nodes") from exc
        finally:
            sys.setrecursionlimit(limit)
        if len(search.found) > max_models:
            raise SizeGuardError(f"more than {max_models} models")
        raw = search.found
    models = [MinorModel(kind, sets) for sets in raw]
    for m in models:
        assert verify_model(pattern, host, m), "enumerated model failed verification"
    return models


# ---------------------------------------------------------------------------
# brute force


BRUTE_FORCE_GUARD = 10


def _small_embeds(pattern_adj: list[int], target_adj: list[int], exact: bool) -> bool:
    """Is there a bijection mapping pattern edges onto target edges (onto all of them if ``exact``)?"""
    k = len(pattern_adj)
    for perm in permutations(range(k)):
        ok = True
        for a in range(k):
            pa = perm[a]
            row = 0
            for b in _bits(pattern_adj[a]):
                row |= 1 << perm[b]
            if exact:
                if row != target_adj[pa]:
                    ok = False
                    break
            elif row & ~target_adj[pa]:
                ok = False
                break
        if ok:
            return True
    return False


def brute_force_contains(pattern: Graph, host: Graph, kind: Kind | str = Kind.ORDINARY) -> bool:
    """Decide containment by listing every partition of a vertex subset into connected blocks.

    Independent of the search above: each partition with exactly
    ``|V(pattern)|`` blocks is contracted and compared with the pattern
    (equality up to isomorphism for induced minors, a spanning subgraph for
    ordinary ones).  Refuses hosts with more than ten vertices.
    """
    kind = Kind(kind)
    if host.n > BRUTE_FORCE_GUARD:
        raise SizeGuardError(f"brute force limited to {BRUTE_FORCE_GUARD} host vertices")
    k = pattern.n
    n = host.n
    if k > n:
        return False
    pattern_adj = [_to_mask(pattern.neighbors(v)) for v in pattern.vertices]
    pdeg = sorted(map(pattern.degree, pattern.vertices))
    cache: dict[tuple[int, ...], bool] = {}
    exact = kind is Kind.INDUCED
    labels = [0] * n  # 0 = unused, 1..k = block

    def quotient_ok() -> bool:
        blocks = [[] for _ in range(k)]
        for v in range(n):
            if labels[v]:
                blocks[labels[v] - 1].append(v)
        for blk in blocks:
            if not host.is_connected_set(blk):
                return False
        adj = [0] * k
        for u, v in host.edges():
            a, b = labels[u], labels[v]
            if a and b and a != b:
                adj[a - 1] |= 1 << (b - 1)
                adj[b - 1] |= 1 << (a - 1)
        key = tuple(adj)
        if key not in cache:
            degs = sorted(bin(r).count("1") for r in adj)
            if exact and degs != pdeg:
                cache[key] = False
            elif not exact and sum(degs) < sum(pdeg):
                cache[key] = False
            else:
                cache[key] = _small_embeds(pattern_adj, adj, exact)
        return cache[key]

    def rec(v: int, opened: int) -> bool:
        if k - opened > n - v:
            return False
        if v == n:
            return opened == k and quotient_ok()
        labels[v] = 0
        if rec(v + 1, opened):
            return True
        for b in range(1, opened + 1):
            labels[v] = b
            if rec(v + 1, opened):
                return True
        if opened < k:
            labels[v] = opened + 1
            if rec(v + 1, opened + 1):
                return True
        labels[v] = 0
        return False

    return rec(0, 0)
