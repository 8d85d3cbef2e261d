"""Region intersection graphs: realisation, verification, search, and minor extraction.

A representation assigns every vertex ``v`` of a graph a connected region
``R_v`` of a host graph; ``uv`` is an edge exactly when ``R_u`` and ``R_v``
share a host vertex.
"""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .graph import Graph, GraphError, SizeGuardError, subdivide
from .io import graph_from_dict, graph_to_dict
from .minors import Kind, MinorModel, SearchOutcome, Status, Verdict, verify_model


class ExtractionError(RuntimeError):
    """The extracted branch sets failed to form a model (should not happen on valid input)."""


@dataclass(frozen=True)
class RIGRepresentation:
    host: Graph
    regions: Mapping[int, frozenset[int]]

    def __post_init__(self):
        object.__setattr__(
            self, "regions", {int(v): frozenset(r) for v, r in sorted(self.regions.items())}
        )

    def to_dict(self) -> dict:
        return {
            "host": graph_to_dict(self.host),
            "regions": {str(v): sorted(r) for v, r in self.regions.items()},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "RIGRepresentation":
        return cls(
            graph_from_dict(data["host"]),
            {int(v): frozenset(r) for v, r in data["regions"].items()},
        )


def _check_regions(rep: RIGRepresentation) -> None:
    vs = sorted(rep.regions)
    if vs != list(range(len(vs))):
        raise GraphError("represented vertices must be 0..k-1")
    for v, region in rep.regions.items():
        if any(not 0 <= x < rep.host.n for x in region):
            raise GraphError(f"region of {v} uses a vertex outside the host")
        if not rep.host.is_connected_set(region):
            raise GraphError(f"region of {v} is empty or not connected")


def realize(rep: RIGRepresentation) -> Graph:
    """The intersection graph of the regions."""
    _check_regions(rep)
    k = len(rep.regions)
    regions = [rep.regions[v] for v in range(k)]
    edges = [(u, v) for u in range(k) for v in range(u + 1, k) if regions[u] & regions[v]]
    return Graph(k, edges)


def canonical_subdivision_rep(g: Graph) -> RIGRepresentation:
    """``g`` as a region intersection graph over its 1-subdivision.

    ``R_v`` is ``v`` together with the subdivision vertices of its incident edges.
    """
    host = subdivide(g, 1)
    regions = {v: {v} for v in g.vertices}
    for idx, (u, v) in enumerate(g.edges()):
        s = g.n + idx
        regions[u].add(s)
        regions[v].add(s)
    return RIGRepresentation(host, regions)


def verify_representation(g: Graph, rep: RIGRepresentation) -> Verdict:
    if set(rep.regions) != set(g.vertices):
        raise GraphError("represented vertices differ from V(g)")
    for v in g.vertices:
        region = rep.regions[v]
        if any(not 0 <= x < rep.host.n for x in region):
            return Verdict(False, "unknown host vertex", f"region of {v}")
        if not rep.host.is_connected_set(region):
            return Verdict(False, "region not connected", f"region of {v}")
    real = realize(rep)
    for u, v in g.edges():
        if not real.has_edge(u, v):
            return Verdict(False, "missing edge", f"regions of {u} and {v} are disjoint")
    for u, v in real.edges():
        if not g.has_edge(u, v):
            return Verdict(False, "extra edge", f"regions of {u} and {v} intersect")
    return Verdict(True)


# ---------------------------------------------------------------------------
# search


RIG_SEARCH_GUARD = 16


def connected_subsets(host: Graph, max_size: int) -> list[int]:
    """All connected vertex subsets of size <= ``max_size``, as bitmasks, by (size, mask)."""
    hm = host.masks
    layer = {1 << v for v in host.vertices}
    out = list(layer)
    for _ in range(max_size - 1):
        nxt = set()
        for s in layer:
            nb = 0
            rest = s
            while rest:
                low = rest & -rest
                nb |= hm[low.bit_length() - 1]
                rest ^= low
            nb &= ~s
            while nb:
                low = nb & -nb
                nxt.add(s | low)
                nb ^= low
        nxt -= set(out)
        if not nxt:
            break
        out.extend(nxt)
        layer = nxt
    return sorted(out, key=lambda m: (bin(m).count("1"), m))


class _Budget(Exception):
    pass


def find_rig_representation(
    g: Graph,
    host: Graph,
    max_region_size: int | None = None,
    budget: int | None = None,
) -> SearchOutcome:
    """Exhaustive search for a representation of ``g`` over ``host``.

    Regions are restricted to at most ``max_region_size`` host vertices
    (default: all of them), so ``Absent`` means no representation within
    that cap.  Vertices are placed in an order that keeps each new vertex
    adjacent to as many placed ones as possible; every candidate region must
    meet the placed neighbours' regions and avoid the others.
    """
    if host.n > RIG_SEARCH_GUARD:
        raise SizeGuardError(f"representation search limited to {RIG_SEARCH_GUARD} host vertices")
    if g.n == 0:
        raise GraphError("graph must be non-empty")
    cap = host.n if max_region_size is None else max_region_size
    subsets = connected_subsets(host, cap)
    order: list[int] = []
    placed: set[int] = set()
    while len(order) < g.n:
        v = max(
            (v for v in g.vertices if v not in placed),
            key=lambda v: (len(g.neighbors(v) & placed), g.degree(v), -v),
        )
        order.append(v)
        placed.add(v)
    nodes = [0]
    chosen: dict[int, int] = {}

    def rec(idx: int) -> bool:
        nodes[0] += 1
        if budget is not None and nodes[0] > budget:
            raise _Budget
        if idx == len(order):
            return True
        v = order[idx]
        meet = [chosen[u] for u in g.neighbors(v) if u in chosen]
        avoid = 0
        for u, r in chosen.items():
            if u != v and not g.has_edge(u, v):
                avoid |= r
        for s in subsets:
            if s & avoid:
                continue
            if all(s & r for r in meet):
                chosen[v] = s
                if rec(idx + 1):
                    return True
                del chosen[v]
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 5000))
    try:
        ok = rec(0)
    except _Budget:
        return SearchOutcome(Status.UNKNOWN, None, nodes[0])
    finally:
        sys.setrecursionlimit(limit)
    if not ok:
        return SearchOutcome(Status.ABSENT, None, nodes[0])
    rep = RIGRepresentation(
        host, {v: frozenset(x for x in host.vertices if m >> x & 1) for v, m in chosen.items()}
    )
    verdict = verify_representation(g, rep)
    if not verdict:
        raise AssertionError(f"search produced an invalid representation: {verdict}")
    return SearchOutcome(Status.FOUND, rep, nodes[0])


# ---------------------------------------------------------------------------
# minor extraction


def _union_regions(rep: RIGRepresentation, vertices) -> set[int]:
    out: set[int] = set()
    for x in vertices:
        out |= rep.regions[x]
    return out


def _shortest_path(host: Graph, within: set[int], sources: set[int], targets: set[int]) -> list[int]:
    """Shortest path inside ``within`` from ``sources`` to ``targets`` (deterministic ties)."""
    parent = {s: None for s in sorted(sources)}
    queue = deque(sorted(sources))
    while queue:
        u = queue.popleft()
        if u in targets:
            path = [u]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for w in sorted(host.neighbors(u)):
            if w in within and w not in parent:
                parent[w] = u
                queue.append(w)
    return []


def extract_minor_from_rig(rep: RIGRepresentation, h: Graph, model: MinorModel) -> MinorModel:
    """Turn an induced model of h^(1) in a region intersection graph into a model of h in the host.

    Branching vertex ``v`` of ``h`` gets ``W_v``, the union of the regions
    of its branch set.  For each edge ``uv`` (``u < v``) a shortest host
    path inside the region union of the subdivision branch set joins
    ``W_u`` to ``W_v``; its interior is split at the midpoint, the extra
    middle vertex going to ``u``.

    ``model`` must be an induced model of ``subdivide(h, 1)`` (branching
    vertices ``0..|V(h)|-1``, then one subdivision vertex per edge in
    lexicographic order) in ``realize(rep)``.
    """
    graph = realize(rep)
    pattern = subdivide(h, 1)
    if model.kind is not Kind.INDUCED:
        raise GraphError("precondition: model must be an induced model")
    verdict = verify_model(pattern, graph, model)
    if not verdict:
        raise GraphError(f"precondition: model is not valid ({verdict.reason}: {verdict.detail})")
    branches = {v: _union_regions(rep, model.assignment[v]) for v in h.vertices}
    for idx, (u, v) in enumerate(h.edges()):
        s = h.n + idx
        zone = _union_regions(rep, model.assignment[s])
        path = _shortest_path(rep.host, zone, zone & branches[u], zone & branches[v])
        if not path:
            raise ExtractionError(f"no path for edge {u}-{v} inside its subdivision regions")
        interior = path[1:-1]
        half = (len(interior) + 1) // 2
        branches[u] |= set(interior[:half])
        branches[v] |= set(interior[half:])
    out = MinorModel(Kind.ORDINARY, branches)
    verdict = verify_model(h, rep.host, out)
    if not verdict:
        raise ExtractionError(f"extracted model invalid: {verdict.reason} ({verdict.detail})")
    return out
