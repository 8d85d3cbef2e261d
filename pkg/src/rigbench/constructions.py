"""Generators for the apex-grid counterexample family.

``apex_grid`` and ``pd_grid`` are the two base families.  ``build_bn`` makes
``n`` disjoint copies of the ``g``-subdivided apex grid; ``build_bn_prime``
threads a Hamiltonian path through it (adding the few chords that requires)
and ``build_g`` / ``build_gg`` hang ``n`` long paths off that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .graph import (
    ApexSubdivision,
    ApexVertex,
    EdgeSubdivision,
    Graph,
    GraphBuilder,
    GraphError,
    GridVertex,
    PathVertex,
    Plain,
    disjoint_copies,
    subdivide,
)
from .io import graph_from_dict, graph_to_dict


class ConstructionError(RuntimeError):
    """A generator's self-check failed."""


@dataclass(frozen=True)
class ConstructionBundle:
    """A generated graph plus the bookkeeping later stages need.

    ``order`` lists vertex ids along the Hamiltonian path of B' (so
    ``b_index[i] == order[i - 1]``); ``copy_ranges`` holds half-open position
    ranges into ``order``; ``path_attach[(j, i)]`` is the vertex ``p_{j,i}``.
    """

    graph: Graph
    params: dict[str, Any]
    order: tuple[int, ...] | None = None
    extra_edges: tuple[tuple[int, int], ...] | None = None
    copy_ranges: tuple[tuple[int, int, int], ...] = ()
    b_index: dict[int, int] = field(default_factory=dict)
    path_attach: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.params["n"]

    @property
    def g(self) -> int:
        return self.params["g"]

    @property
    def base_size(self) -> int:
        """Number of vertices of the underlying B_{g,n}."""
        return len(self.b_index) if self.b_index else self.graph.n

    def to_dict(self) -> dict[str, Any]:
        return {
            "params": dict(self.params),
            "graph": graph_to_dict(self.graph),
            "order": None if self.order is None else list(self.order),
            "extraEdges": None if self.extra_edges is None else [list(e) for e in self.extra_edges],
            "copyRanges": [list(r) for r in self.copy_ranges],
            "bIndex": {str(i): v for i, v in sorted(self.b_index.items())},
            "pathAttach": {f"{j},{i}": v for (j, i), v in sorted(self.path_attach.items())},
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ConstructionBundle":
        return cls(
            graph=graph_from_dict(data["graph"]),
            params=dict(data["params"]),
            order=None if data.get("order") is None else tuple(data["order"]),
            extra_edges=None
            if data.get("extraEdges") is None
            else tuple(tuple(e) for e in data["extraEdges"]),
            copy_ranges=tuple(tuple(r) for r in data.get("copyRanges", ())),
            b_index={int(k): v for k, v in data.get("bIndex", {}).items()},
            path_attach={
                tuple(int(x) for x in k.split(",")): v
                for k, v in data.get("pathAttach", {}).items()
            },
        )


def _check_params(n: int, g: int = 1, min_g: int = 1) -> None:
    if n < 1:
        raise GraphError(f"n must be positive, got {n}")
    if g < min_g:
        raise GraphError(f"g must be at least {min_g}, got {g}")


# ---------------------------------------------------------------------------
# base families


def grid_vertex_id(n: int, col: int, row: int) -> int:
    """Vertex id of grid position (col, row), both 1-based, in ``apex_grid(n)``."""
    return (col - 1) * n + (row - 1)


def apex_grid(n: int) -> Graph:
    """A_n: the n x n grid plus a universal apex (vertex ``n*n``).

    Row 1 is the bottom row, so the "top-left" vertex is (col 1, row n).
    """
    _check_params(n)
    b = GraphBuilder()
    for col in range(1, n + 1):
        for row in range(1, n + 1):
            b.add_vertex(GridVertex(0, col, row))
    apex = b.add_vertex(ApexVertex(0))
    for col in range(1, n + 1):
        for row in range(1, n + 1):
            v = grid_vertex_id(n, col, row)
            if row < n:
                b.add_edge(v, grid_vertex_id(n, col, row + 1))
            if col < n:
                b.add_edge(v, grid_vertex_id(n, col + 1, row))
            b.add_edge(v, apex)
    return b.build()


def pd_grid(n: int) -> Graph:
    """Pohoata-Davies grid: n disjoint n-vertex paths and n column dominators.

    ``a_{i,j}`` (column i on path j) is labelled ``PathVertex(j, i)``; the
    dominator ``s_i`` of column i is labelled ``Plain(i)``.
    """
    _check_params(n)
    b = GraphBuilder()
    a = {}
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            a[i, j] = b.add_vertex(PathVertex(j, i))
            if i > 1:
                b.add_edge(a[i - 1, j], a[i, j])
    for i in range(1, n + 1):
        s = b.add_vertex(Plain(i))
        for j in range(1, n + 1):
            b.add_edge(s, a[i, j])
    return b.build()


def _subdivided_apex_grid(n: int, g: int) -> Graph:
    """A_n^(g) with apex-edge subdivision vertices relabelled ApexSubdivision."""
    base = apex_grid(n)
    sub = subdivide(base, g)
    apex = n * n
    labels = list(sub.labels)
    for v in range(base.n, sub.n):
        lab = labels[v]
        if isinstance(lab, EdgeSubdivision) and apex in (lab.a, lab.b):
            grid = lab.a if lab.b == apex else lab.b
            gl = base.label(grid)
            # index counted from the grid end (the grid vertex has the smaller id)
            labels[v] = ApexSubdivision(0, gl.col, gl.row, lab.index)
    return sub.with_labels(labels)


def build_bn(g: int, n: int) -> Graph:
    """B_{g,n} = n disjoint copies of the g-subdivision of A_n."""
    _check_params(n, g)
    return disjoint_copies(_subdivided_apex_grid(n, g), n)


# ---------------------------------------------------------------------------
# the Hamiltonian order of B'


def _copy_tokens(n: int) -> list[tuple]:
    """Route through one copy of A_n^(1), as tokens, top-left grid vertex to apex.

    Tokens: ``("v", col, row)`` grid vertex; ``("h", col, row)`` subdivision of
    the vertical edge (col,row)-(col,row+1); ``("w", col, row)`` of the
    horizontal edge (col,row)-(col+1,row); ``("c", col, row)`` of the apex edge
    at (col,row+1); ``("apex",)``.

    Columns 1..n-1 are snaked (odd columns downwards, even upwards) and the
    last column climbs to the apex when n is even, descends when n is odd.
    """
    seq: list[tuple] = []
    for i in range(1, n):
        if i % 2 == 1:
            for j in range(n, 1, -1):
                seq += [("v", i, j), ("w", i, j), ("c", i, j - 1), ("h", i, j - 1)]
            seq += [("v", i, 1), ("c", i, 0), ("w", i, 1)]
        else:
            seq += [("v", i, 1), ("c", i, 0), ("w", i, 1), ("h", i, 1), ("c", i, 1)]
            for j in range(2, n):
                seq += [("w", i, j), ("v", i, j), ("h", i, j), ("c", i, j)]
            seq += [("v", i, n), ("w", i, n)]
    if n % 2 == 0 or n == 1:
        for j in range(1, n):
            seq += [("v", n, j), ("c", n, j - 1), ("h", n, j)]
        seq += [("v", n, n), ("c", n, n - 1)]
    else:
        for j in range(n, 1, -1):
            seq += [("v", n, j), ("c", n, j - 1), ("h", n, j - 1)]
        seq += [("v", n, 1), ("c", n, 0)]
    seq.append(("apex",))
    return seq


def _token_endpoints(n: int, tok: tuple) -> tuple[int, int] | None:
    """Base-graph endpoints (smaller id first) of a subdivision token."""
    kind = tok[0]
    if kind in ("v", "apex"):
        return None
    i, j = tok[1], tok[2]
    if kind == "h":
        a, b = grid_vertex_id(n, i, j), grid_vertex_id(n, i, j + 1)
    elif kind == "w":
        a, b = grid_vertex_id(n, i, j), grid_vertex_id(n, i + 1, j)
    else:
        a, b = grid_vertex_id(n, i, j + 1), n * n
    return (min(a, b), max(a, b))


def _token_geometry(n: int, tok: tuple) -> tuple[tuple[float, float], tuple[float, float]]:
    """Planar positions of a token's two ends (equal for branching tokens).

    For subdivision tokens the first position is the end next to the smaller
    base endpoint.  Apex-edge runs are drawn from their grid corner towards the
    centre of the face (or outer region) they hang into.
    """
    kind = tok[0]
    if kind == "apex":
        p = (n + 2.5, (n + 1) / 2)
        return p, p
    i, j = tok[1], tok[2]
    if kind == "v":
        return (i, j), (i, j)
    if kind == "h":
        return (i, j + 0.25), (i, j + 0.75)
    if kind == "w":
        return (i + 0.25, j), (i + 0.75, j)
    return (i + 0.15, j + 0.85), (i + 0.5, j + 0.5)


def _vertex_position_lookup(n: int, g: int) -> tuple[dict[tuple, list[int]], int]:
    """Map tokens to vertex ids of one copy of A_n^(g) (runs ordered from smaller endpoint)."""
    base = apex_grid(n)
    # subdivide() appends each edge's run contiguously, edges in lexicographic order
    runs: dict[tuple[int, int], list[int]] = {}
    nxt = base.n
    for a, b in base.edges():
        runs[(a, b)] = list(range(nxt, nxt + g))
        nxt += g
    table: dict[tuple, list[int]] = {}
    for tok in _copy_tokens(n):
        ends = _token_endpoints(n, tok)
        if ends is None:
            table[tok] = [n * n] if tok[0] == "apex" else [grid_vertex_id(n, tok[1], tok[2])]
        else:
            table[tok] = runs[ends]
    return table, nxt


def _copy_order(n: int, g: int) -> list[int]:
    """Hamiltonian order of one copy of A_n^(g) as local vertex ids.

    Each subdivided edge is walked as a run, entered from the end nearest
    (in the reference drawing) to where the previous token was left.
    """
    table, _ = _vertex_position_lookup(n, g)
    order: list[int] = []
    exit_pos = None
    for tok in _copy_tokens(n):
        verts = table[tok]
        near, far = _token_geometry(n, tok)
        if len(verts) > 1 and exit_pos is not None and math.dist(exit_pos, far) < math.dist(
            exit_pos, near
        ):
            verts = verts[::-1]
            near, far = far, near
        order.extend(verts)
        exit_pos = far
    return order


def bprime_order(g: int, n: int) -> list[int]:
    """The order of V(B_{g,n}): copies in turn, each from its top-left vertex to its apex."""
    _check_params(n, g)
    local = _copy_order(n, g)
    size = len(local)
    return [c * size + v for c in range(n) for v in local]


def build_bn_prime(g: int, n: int) -> ConstructionBundle:
    """B'_{g,n}: B_{g,n} plus the chords its Hamiltonian order needs.

    The extra edges are exactly the consecutive pairs of the order that are
    not already edges of B_{g,n}; one of them per adjacent pair of copies is
    the connector from the previous copy's apex to the next top-left vertex.
    """
    base = build_bn(g, n)
    order = bprime_order(g, n)
    extra = sorted(
        (min(u, v), max(u, v)) for u, v in zip(order, order[1:]) if not base.has_edge(u, v)
    )
    graph = Graph(base.n, list(base.edges()) + extra, base.labels)
    size = base.n // n
    copy_ranges = tuple((c, c * size, (c + 1) * size) for c in range(n))
    bundle = ConstructionBundle(
        graph=graph,
        params={"family": "bn_prime", "g": g, "n": n},
        order=tuple(order),
        extra_edges=tuple(extra),
        copy_ranges=copy_ranges,
        b_index={i + 1: v for i, v in enumerate(order)},
    )
    problems = check_bprime_contract(base, bundle)
    if problems:
        raise ConstructionError("; ".join(problems))
    return bundle


def _copy_of(label) -> int:
    return getattr(label, "copy", -1)


def check_bprime_contract(base: Graph, bundle: ConstructionBundle) -> list[str]:
    """Check (H1)-(H4) of a B' bundle against B = ``base``; returns the failures."""
    problems = []
    bp = bundle.graph
    order = bundle.order
    n = bundle.n
    # H1: spanning supergraph
    if bp.n != base.n or any(not bp.has_edge(u, v) for u, v in base.edges()):
        problems.append("H1: not a spanning supergraph of B")
    # H2: order is a Hamiltonian path of B'
    if order is None or sorted(order) != list(range(base.n)):
        problems.append("H2: order is not a permutation of V(B)")
    elif any(not bp.has_edge(u, v) for u, v in zip(order, order[1:])):
        problems.append("H2: consecutive order entries are not adjacent in B'")
    # H3: copies are contiguous along the order
    if order is not None:
        seen_copies = []
        for v in order:
            c = _copy_of(base.label(v))
            if not seen_copies or seen_copies[-1] != c:
                seen_copies.append(c)
        if len(seen_copies) != len(set(seen_copies)):
            problems.append("H3: some copy is not contiguous along the order")
        for c, start, stop in bundle.copy_ranges:
            if any(_copy_of(base.label(v)) != c for v in order[start:stop]):
                problems.append(f"H3: copy range {c} mislabelled")
    # H4: exactly one inter-copy extra edge per adjacent pair, ending at the previous apex
    inter = [
        (u, v)
        for u, v in bundle.extra_edges or ()
        if _copy_of(base.label(u)) != _copy_of(base.label(v))
    ]
    if len(inter) != n - 1:
        problems.append(f"H4: {len(inter)} inter-copy edges, expected {n - 1}")
    for u, v in inter:
        lu, lv = base.label(u), base.label(v)
        cu, cv = _copy_of(lu), _copy_of(lv)
        prev, nxt = (u, v) if cu < cv else (v, u)
        if abs(cu - cv) != 1 or not isinstance(base.label(prev), ApexVertex):
            problems.append(f"H4: inter-copy edge {u}-{v} does not leave the previous apex")
        nl = base.label(nxt)
        if not (isinstance(nl, GridVertex) and nl.col == 1 and nl.row == n):
            problems.append(f"H4: inter-copy edge {u}-{v} does not reach a top-left vertex")
    return problems


# ---------------------------------------------------------------------------
# G and G_{g,n}


def _attach_paths(base: Graph, order: list[int], n: int, spacing: int, params) -> ConstructionBundle:
    size = base.n
    path_len = spacing * size
    b = GraphBuilder()
    for v in base.vertices:
        b.add_vertex(base.label(v))
    for u, v in base.edges():
        b.add_edge(u, v)
    path_attach = {}
    for j in range(1, n + 1):
        first = b.n
        for pos in range(1, path_len + 1):
            x = b.add_vertex(PathVertex(j, pos))
            if pos > 1:
                b.add_edge(x - 1, x)
        for i in range(1, size + 1):
            p = first + spacing * i - 2  # position spacing*i - 1, 1-based
            path_attach[(j, i)] = p
            b.add_edge(p, order[i - 1])
    per_copy = size // n
    return ConstructionBundle(
        graph=b.build(),
        params=params,
        order=tuple(order),
        extra_edges=None,
        copy_ranges=tuple((c, c * per_copy, (c + 1) * per_copy) for c in range(n)),
        b_index={i + 1: v for i, v in enumerate(order)},
        path_attach=path_attach,
    )


def build_g(n: int) -> ConstructionBundle:
    """The girth-5 graph G: B_n plus paths P_1..P_n on 2|V(B_n)| vertices.

    The (2i-1)-st vertex of every path is joined to b_i, the i-th vertex of
    B_n along the B' order.  G itself carries no B' chords.
    """
    _check_params(n)
    base = build_bn(1, n)
    return _attach_paths(base, bprime_order(1, n), n, 2, {"family": "g", "g": 1, "n": n})


def build_gg(g: int, n: int) -> ConstructionBundle:
    """G_{g,n}: B_{g,n} plus n paths on g|V(B_{g,n})| vertices, attached every g steps."""
    _check_params(n, g, min_g=2)
    base = build_bn(g, n)
    return _attach_paths(base, bprime_order(g, n), n, g, {"family": "gg", "g": g, "n": n})


def path_spacing(bundle: ConstructionBundle) -> int:
    return 2 if bundle.params.get("family") == "g" else bundle.g


def base_vertex_count(n: int, g: int = 1) -> int:
    """|V(B_{g,n})| = n (n^2 + 1 + g (2n(n-1) + n^2))."""
    return n * (n * n + 1 + g * (2 * n * (n - 1) + n * n))


def pd_collapse_parts(bundle: ConstructionBundle) -> list[list[int]]:
    """Parts whose contraction turns G into a Pohoata-Davies grid.

    One part per copy of A_n^(g), then for each path P_j one part per copy:
    the stretch of P_j from its first vertex attached to that copy up to the
    vertex before the next copy's first attachment (ends absorb the path tails).
    """
    n = bundle.n
    graph = bundle.graph
    size = bundle.base_size
    per_copy = size // n
    parts: list[list[int]] = []
    for c, start, stop in bundle.copy_ranges:
        parts.append(sorted(bundle.order[start:stop]))
    spacing = path_spacing(bundle)
    path_len = spacing * size
    for j in range(1, n + 1):
        first = bundle.path_attach[(j, 1)] - (spacing - 2)
        for c in range(n):
            lo = 1 if c == 0 else spacing * (c * per_copy + 1) - 1
            hi = path_len if c == n - 1 else spacing * ((c + 1) * per_copy + 1) - 2
            parts.append([first + pos - 1 for pos in range(lo, hi + 1)])
    return parts
