"""Lifting induced models of K_s^(1) in G to K_s minor models in B'.

Pattern conventions follow ``subdivide(complete_graph(s), 1)``: branching
vertices are ``0..s-1`` (so ``X_k`` is the branch set of ``k``) and the
subdivision vertex of the edge ``k < k'`` is ``subdivision_vertex(s, k, k')``.
Path indices ``j`` and attachment indices ``i`` are 1-based, as in
``ConstructionBundle.path_attach``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Mapping

from .constructions import ConstructionBundle, build_bn_prime, path_spacing
from .graph import Graph, GraphError, complete_graph, subdivide
from .minors import Kind, MinorModel, Verdict, verify_model


def subdivision_vertex(s: int, k: int, k2: int) -> int:
    """Id of the subdivision vertex between branching vertices ``k`` and ``k2`` of K_s^(1)."""
    a, b = min(k, k2), max(k, k2)
    if a == b or not 0 <= a or b >= s:
        raise GraphError(f"no subdivision vertex between {k} and {k2} in K_{s}^(1)")
    # edges of K_s in lexicographic order
    return s + a * s - a * (a + 1) // 2 + (b - a - 1)


def subdivision_pairs(s: int) -> dict[int, tuple[int, int]]:
    return {subdivision_vertex(s, a, b): (a, b) for a, b in combinations(range(s), 2)}


class NormalizationError(RuntimeError):
    """The constructive normaliser could not enforce a condition; ``model`` is the state reached."""

    def __init__(self, reason: str, model: "SubdividedCliqueModel"):
        super().__init__(reason)
        self.reason = reason
        self.model = model


@dataclass(frozen=True)
class SubdividedCliqueModel:
    """An induced model of K_s^(1) in ``bundle.graph`` (a G or G_{g,n} bundle).

    Validity is checked on construction unless ``validate=False``, which is
    only meant for exercising the claim checker on hand-made fixtures.
    """

    s: int
    model: MinorModel
    bundle: ConstructionBundle
    validate: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.s < 2:
            raise GraphError("s must be at least 2")
        if not self.bundle.path_attach:
            raise GraphError("bundle has no attached paths (expected build_g or build_gg)")
        if set(self.model.assignment) != set(self.pattern().vertices):
            raise GraphError("assignment must cover exactly the vertices of K_s^(1)")
        if self.validate:
            verdict = verify_model(self.pattern(), self.bundle.graph, self.as_induced())
            if not verdict:
                raise GraphError(f"not an induced model: {verdict.reason} ({verdict.detail})")

    def pattern(self) -> Graph:
        return subdivide(complete_graph(self.s), 1)

    def as_induced(self) -> MinorModel:
        return MinorModel(Kind.INDUCED, self.model.assignment)

    def branch(self, k: int) -> frozenset[int]:
        return self.model.assignment[k]

    def sub(self, k: int, k2: int) -> frozenset[int]:
        return self.model.assignment[subdivision_vertex(self.s, k, k2)]

    def replace(self, assignment: Mapping[int, frozenset[int]]) -> "SubdividedCliqueModel":
        return SubdividedCliqueModel(
            self.s, MinorModel(Kind.INDUCED, assignment), self.bundle, self.validate
        )

    def to_dict(self) -> dict:
        return {"s": self.s, "model": self.model.to_dict(), "params": dict(self.bundle.params)}


# ---------------------------------------------------------------------------
# coordinates in G


class _Coords:
    """Which vertices of a G bundle are b_i, p_{j,i}, and on which path."""

    def __init__(self, bundle: ConstructionBundle):
        self.bundle = bundle
        self.size = bundle.base_size
        self.spacing = path_spacing(bundle)
        self.path_len = self.spacing * self.size
        self.b_to_i = {v: i for i, v in bundle.b_index.items()}
        self.p_to_ji = {v: ji for ji, v in bundle.path_attach.items()}

    def in_base(self, v: int) -> bool:
        return v < self.size

    def path_of(self, v: int) -> int | None:
        if v < self.size:
            return None
        return (v - self.size) // self.path_len + 1

    def path_pos(self, v: int) -> int:
        return (v - self.size) % self.path_len + 1

    def path_vertex(self, j: int, pos: int) -> int | None:
        if not 1 <= pos <= self.path_len:
            return None
        return self.size + (j - 1) * self.path_len + pos - 1

    def path_neighbors(self, v: int) -> list[int]:
        j, pos = self.path_of(v), self.path_pos(v)
        return [x for x in (self.path_vertex(j, pos - 1), self.path_vertex(j, pos + 1)) if x is not None]


# ---------------------------------------------------------------------------
# normalisation


def _shortest_path(g: Graph, within: set[int], sources: set[int], targets: set[int]) -> list[int]:
    from collections import deque

    parent = {v: None for v in sorted(sources)}
    queue = deque(sorted(sources))
    while queue:
        u = queue.popleft()
        if u in targets:
            path = [u]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for w in sorted(g.neighbors(u)):
            if w in within and w not in parent:
                parent[w] = u
                queue.append(w)
    return []


def _touching(g: Graph, region: set[int], other: frozenset[int]) -> set[int]:
    return {v for v in region if g.neighbors(v) & other}


def _shrink_subdivisions(m: SubdividedCliqueModel, coords: _Coords) -> dict[int, frozenset[int]]:
    g = m.bundle.graph
    sets = dict(m.model.assignment)
    for sv, (a, b) in sorted(subdivision_pairs(m.s).items()):
        region = set(sets[sv])
        if len(region) == 1:
            continue
        options = []
        # keep the far end as the singleton; the rest of the path joins the near side
        for near, far in ((a, b), (b, a)):
            path = _shortest_path(
                g, region, _touching(g, region, sets[near]), _touching(g, region, sets[far])
            )
            if path:
                options.append((path, near))
        if not options:
            raise NormalizationError(f"subdivision set {sv} does not join its neighbours", m)
        # prefer a singleton that is not an attachment vertex p_{j,i}
        options.sort(key=lambda o: (o[0][-1] in coords.p_to_ji, len(o[0])))
        path, near = options[0]
        sets[near] = sets[near] | frozenset(path[:-1])
        sets[sv] = frozenset([path[-1]])
    return sets


def _slide_singletons(m: SubdividedCliqueModel, coords: _Coords) -> SubdividedCliqueModel:
    g = m.bundle.graph
    pattern = m.pattern()
    for sv, (a, b) in sorted(subdivision_pairs(m.s).items()):
        (w,) = m.model.assignment[sv]
        if w not in coords.p_to_ji:
            continue
        nbrs = coords.path_neighbors(w)
        if len(nbrs) != 2:
            continue
        x, y = nbrs
        sets = m.model.assignment
        if not ((x in sets[a] and y in sets[b]) or (x in sets[b] and y in sets[a])):
            continue
        done = False
        for keep_side, give_side in ((a, b), (b, a)):
            # w joins keep_side; the path neighbour of w inside give_side becomes the singleton
            nb = x if x in sets[give_side] else y
            trial = dict(sets)
            trial[keep_side] = sets[keep_side] | {w}
            trial[give_side] = sets[give_side] - {nb}
            trial[sv] = frozenset([nb])
            if trial[give_side] and verify_model(pattern, g, MinorModel(Kind.INDUCED, trial)):
                m = m.replace(trial)
                done = True
                break
        if not done:
            raise NormalizationError(
                f"singleton {w} of subdivision vertex {sv} sits on an attachment vertex and cannot slide",
                m,
            )
    return m


def _minimize(m: SubdividedCliqueModel) -> SubdividedCliqueModel:
    g = m.bundle.graph
    pattern = m.pattern()
    sets = dict(m.model.assignment)
    changed = True
    while changed:
        changed = False
        for k in range(m.s):
            for v in sorted(sets[k], reverse=True):
                if len(sets[k]) == 1:
                    break
                trial = dict(sets)
                trial[k] = sets[k] - {v}
                if verify_model(pattern, g, MinorModel(Kind.INDUCED, trial)):
                    sets = trial
                    changed = True
    return m.replace(sets)


def normalization_problems(m: SubdividedCliqueModel) -> list[str]:
    """Which of the three normal-form conditions fail (empty list when normalised)."""
    coords = _Coords(m.bundle)
    g = m.bundle.graph
    pattern = m.pattern()
    out = []
    for sv, (a, b) in sorted(subdivision_pairs(m.s).items()):
        xs = m.model.assignment[sv]
        if len(xs) != 1:
            out.append(f"subdivision set {sv} is not a singleton")
            continue
        (w,) = xs
        nbrs = coords.path_neighbors(w) if w in coords.p_to_ji else []
        if len(nbrs) == 2:
            x, y = nbrs
            sa, sb = m.branch(a), m.branch(b)
            if (x in sa and y in sb) or (x in sb and y in sa):
                out.append(f"subdivision singleton {w} is an attachment vertex between its neighbours")
    for k in range(m.s):
        for v in sorted(m.branch(k)):
            trial = dict(m.model.assignment)
            trial[k] = m.branch(k) - {v}
            if trial[k] and verify_model(pattern, g, MinorModel(Kind.INDUCED, trial)):
                out.append(f"branch set {k} is not minimal (drop {v})")
                break
    return out


def normalize_model(m: SubdividedCliqueModel) -> SubdividedCliqueModel:
    """Bring ``m`` into the normal form used by the lifting argument.

    1. each subdivision branch set becomes one vertex adjacent to both
       neighbouring branch sets (the rest of a connecting path is handed
       to the near side);
    2. a singleton sitting on some ``p_{j,i}`` whose two path neighbours lie
       in the two neighbouring branch sets is slid onto a path neighbour;
    3. branch sets of branching vertices are shrunk until no single vertex
       can be dropped, which for one set at a time is the same as
       inclusion-wise minimality.

    Raises ``NormalizationError`` when a step cannot be carried out.
    Normal-form input is returned unchanged.
    """
    if not m.validate:
        raise GraphError("normalisation needs a validated model")
    coords = _Coords(m.bundle)
    m = m.replace(_shrink_subdivisions(m, coords))
    for _ in range(4):
        m = _slide_singletons(m, coords)
        m = _minimize(m)
        if not normalization_problems(m):
            return m
    raise NormalizationError("; ".join(normalization_problems(m)), m)


# ---------------------------------------------------------------------------
# intervals and claims


@dataclass(frozen=True, order=True)
class Interval:
    owner: int
    path: int
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(self.indices))
        if not idx or idx != tuple(range(idx[0], idx[-1] + 1)):
            raise GraphError(f"interval indices must be non-empty and consecutive, got {idx}")
        object.__setattr__(self, "indices", idx)

    @property
    def lo(self) -> int:
        return self.indices[0]

    @property
    def hi(self) -> int:
        return self.indices[-1]

    def as_set(self) -> frozenset[int]:
        return frozenset(self.indices)

    def to_dict(self) -> dict:
        return {"owner": self.owner, "path": self.path, "indices": list(self.indices)}


def intervals_of(m: SubdividedCliqueModel, k: int) -> list[Interval]:
    """One interval per component of ``X_k`` on a path that contains attachment vertices."""
    coords = _Coords(m.bundle)
    g = m.bundle.graph
    xs = m.branch(k)
    out = []
    for j in range(1, m.bundle.n + 1):
        on_path = [v for v in xs if coords.path_of(v) == j]
        for comp in g.components(on_path):
            idx = [coords.p_to_ji[v][1] for v in comp if v in coords.p_to_ji]
            if idx:
                out.append(Interval(k, j, tuple(idx)))
    return sorted(out, key=lambda iv: (iv.path, iv.lo))


@dataclass(frozen=True)
class ClaimVerdict:
    holds: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {"holds": self.holds, "witness": self.witness}


@dataclass(frozen=True)
class ClaimReport:
    nested: ClaimVerdict
    nested_shared: ClaimVerdict
    two_cover: ClaimVerdict
    triple: ClaimVerdict

    @property
    def all_hold(self) -> bool:
        return all((self.nested, self.nested_shared, self.two_cover, self.triple))

    def to_dict(self) -> dict:
        return {
            "nested": self.nested.to_dict(),
            "nestedShared": self.nested_shared.to_dict(),
            "twoCover": self.two_cover.to_dict(),
            "triple": self.triple.to_dict(),
        }


def _iv(iv: Interval) -> dict:
    return iv.to_dict()


def check_claims(m: SubdividedCliqueModel) -> ClaimReport:
    """Evaluate the interval claims literally over all interval pairs and triples.

    * nested: no interval of ``X_k`` is contained in an interval of ``X_k'``;
    * nested_shared: for overlapping ``I, I'`` at most one ``b_i`` with
      ``i`` in ``I & I'`` belongs to a branch set, and if one does it is
      the singleton ``s_{k,k'}``;
    * two_cover: no ``I`` inside ``I' | I''`` (nor inside ``I' | I'' | {i}``
      when ``s_{k',k''} = p_{j,i}``);
    * triple: for overlapping ``I, I'`` with ``min(I) < min(I')``, no
      ``p_{j,i}`` or ``b_i`` with ``i`` in ``[min(I')-1, max(I)+1]`` lies in a
      third branching set.

    The first violation found (in a fixed order) is the witness.
    """
    coords = _Coords(m.bundle)
    s = m.s
    ivs = {k: intervals_of(m, k) for k in range(s)}
    owner: dict[int, int] = {}
    for p, xs in m.model.assignment.items():
        for v in xs:
            owner[v] = p
    b_of = m.bundle.b_index

    nested = ClaimVerdict(True)
    shared = ClaimVerdict(True)
    for k, k2 in permutations(range(s), 2):
        for I in ivs[k]:
            for J in ivs[k2]:
                if nested and I.as_set() <= J.as_set():
                    nested = ClaimVerdict(False, {"I": _iv(I), "I2": _iv(J)})
                if shared and k < k2:
                    common = sorted(I.as_set() & J.as_set())
                    hit = [i for i in common if b_of.get(i) in owner]
                    sk = m.sub(k, k2)
                    if len(hit) > 1 or (hit and frozenset([b_of[hit[0]]]) != sk):
                        shared = ClaimVerdict(
                            False, {"I": _iv(I), "I2": _iv(J), "occupied": [b_of[i] for i in hit]}
                        )

    cover = ClaimVerdict(True)
    for k in range(s):
        if not cover:
            break
        for k2, k3 in combinations([x for x in range(s) if x != k], 2):
            extra: set[int] = set()
            (sv,) = m.sub(k2, k3) if len(m.sub(k2, k3)) == 1 else (None,)
            if sv in coords.p_to_ji:
                extra = {coords.p_to_ji[sv][1]}
            for I in ivs[k]:
                for J in ivs[k2]:
                    for K in ivs[k3]:
                        union = J.as_set() | K.as_set()
                        if I.as_set() <= union:
                            cover = ClaimVerdict(False, {"I": _iv(I), "I2": _iv(J), "I3": _iv(K)})
                        elif extra and I.as_set() <= union | extra:
                            cover = ClaimVerdict(
                                False,
                                {"I": _iv(I), "I2": _iv(J), "I3": _iv(K), "extraIndex": sorted(extra)[0]},
                            )
                        if not cover:
                            break
                    if not cover:
                        break
                if not cover:
                    break
            if not cover:
                break

    # indices i touched by each branching set through p_{j,i} or b_i
    touched: dict[int, set[int]] = {k: set() for k in range(s)}
    for k in range(s):
        for v in m.branch(k):
            if v in coords.p_to_ji:
                touched[k].add(coords.p_to_ji[v][1])
            if v in coords.b_to_i:
                touched[k].add(coords.b_to_i[v])
    triple = ClaimVerdict(True)
    for k, k2 in permutations(range(s), 2):
        if not triple:
            break
        for I in ivs[k]:
            for J in ivs[k2]:
                if not (I.as_set() & J.as_set()) or not I.lo < J.lo:
                    continue
                window = set(range(J.lo - 1, I.hi + 2))
                for k3 in range(s):
                    if k3 in (k, k2):
                        continue
                    bad = sorted(window & touched[k3])
                    if bad:
                        triple = ClaimVerdict(
                            False, {"I": _iv(I), "I2": _iv(J), "third": k3, "index": bad[0]}
                        )
                        break
                if not triple:
                    break
            if not triple:
                break
    return ClaimReport(nested, shared, cover, triple)


# ---------------------------------------------------------------------------
# the lift


@dataclass(frozen=True)
class LiftResult:
    y: dict[int, frozenset[int]]
    y_prime: dict[int, frozenset[int]]
    verdict: Verdict
    disjoint: bool
    connected: bool
    adjacent: bool
    claims: ClaimReport

    @property
    def valid(self) -> bool:
        return self.verdict.ok

    def model(self) -> MinorModel:
        return MinorModel(Kind.ORDINARY, self.y_prime)

    def to_dict(self) -> dict:
        return {
            "Y": {str(k): sorted(v) for k, v in self.y.items()},
            "Yprime": {str(k): sorted(v) for k, v in self.y_prime.items()},
            "valid": self.verdict.ok,
            "reason": self.verdict.reason,
            "detail": self.verdict.detail,
            "disjoint": self.disjoint,
            "connected": self.connected,
            "adjacent": self.adjacent,
            "claims": self.claims.to_dict(),
        }


def _bprime_for(bundle: ConstructionBundle) -> ConstructionBundle:
    g = 1 if bundle.params.get("family") == "g" else bundle.g
    return build_bn_prime(g, bundle.n)


def lift_to_bprime(m: SubdividedCliqueModel, bprime: ConstructionBundle | None = None) -> LiftResult:
    """Build ``Y_k`` and ``Y'_k`` in B' from the branch sets ``X_k`` in G.

    ``Y_k`` keeps ``X_k``'s vertices of B and adds ``b_i`` for every
    attachment vertex ``p_{j,i}`` of ``X_k``, unless an earlier ``X_k'``
    (``k' < k``) also has some ``p_{j',i}``.  ``Y'_k`` adds the subdivision
    singletons ``s_{k,k'}`` with ``k < k'`` that lie in B and are not already
    in some ``Y``.  The result is verified as a K_s minor model of B'
    whatever the claims say; failing claims are reported alongside.
    """
    if bprime is None:
        bprime = _bprime_for(m.bundle)
    if bprime.n != m.bundle.n or bprime.extra_edges is None:
        raise GraphError("B' bundle does not match the model's n (or is not a B' bundle)")
    if bprime.order != m.bundle.order:
        raise GraphError("B' order differs from the order the paths were attached along")
    coords = _Coords(m.bundle)
    s = m.s
    for sv in subdivision_pairs(s):
        if len(m.model.assignment[sv]) != 1:
            raise GraphError("subdivision branch sets must be singletons (normalise first)")
    first_claim: dict[int, int] = {}
    for k in range(s):
        for v in m.branch(k):
            if v in coords.p_to_ji:
                i = coords.p_to_ji[v][1]
                first_claim.setdefault(i, k)
                first_claim[i] = min(first_claim[i], k)
    y = {}
    for k in range(s):
        ys = {v for v in m.branch(k) if coords.in_base(v)}
        for v in m.branch(k):
            if v in coords.p_to_ji:
                i = coords.p_to_ji[v][1]
                if first_claim[i] == k:
                    ys.add(m.bundle.b_index[i])
        y[k] = frozenset(ys)
    taken = frozenset().union(*y.values())
    y_prime = {}
    for k in range(s):
        extra = set()
        for k2 in range(k + 1, s):
            (sv,) = m.sub(k, k2)
            if coords.in_base(sv) and sv not in taken:
                extra.add(sv)
        y_prime[k] = y[k] | frozenset(extra)
    host = bprime.graph
    disjoint = all(not (y_prime[a] & y_prime[b]) for a, b in combinations(range(s), 2))
    connected = all(y_prime[k] and host.is_connected_set(y_prime[k]) for k in range(s))
    adjacent = all(
        any(host.neighbors(v) & y_prime[b] for v in y_prime[a]) for a, b in combinations(range(s), 2)
    )
    verdict = verify_model(complete_graph(s), host, MinorModel(Kind.ORDINARY, y_prime))
    if verdict.ok and not (disjoint and connected and adjacent):
        raise AssertionError("verified model with a failing component check")
    return LiftResult(y, y_prime, verdict, disjoint, connected, adjacent, check_claims(m))
