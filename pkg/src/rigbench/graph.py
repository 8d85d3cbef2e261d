"""Finite simple undirected graphs with dense integer vertices and role labels.

Vertices are ``0..n-1`` in construction order.  Structure (which copy, grid
position, path index, ...) lives in the optional per-vertex label, never in
identifier arithmetic.
"""

from __future__ import annotations

import dataclasses
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import networkx as nx


class GraphError(ValueError):
    """Raised for malformed graphs or invalid arguments to graph operations."""


class SizeGuardError(RuntimeError):
    """Raised when an exhaustive routine refuses an input above its size guard."""


# ---------------------------------------------------------------------------
# vertex labels


@dataclass(frozen=True, order=True)
class Plain:
    copy: int = 0


@dataclass(frozen=True, order=True)
class GridVertex:
    copy: int
    col: int
    row: int


@dataclass(frozen=True, order=True)
class EdgeSubdivision:
    copy: int
    a: int
    b: int
    index: int


@dataclass(frozen=True, order=True)
class ApexVertex:
    copy: int


@dataclass(frozen=True, order=True)
class ApexSubdivision:
    copy: int
    col: int
    row: int
    index: int = 1


@dataclass(frozen=True, order=True)
class PathVertex:
    path: int
    position: int


VertexLabel = Plain | GridVertex | EdgeSubdivision | ApexVertex | ApexSubdivision | PathVertex

LABEL_TYPES: dict[str, type] = {
    cls.__name__: cls
    for cls in (Plain, GridVertex, EdgeSubdivision, ApexVertex, ApexSubdivision, PathVertex)
}


def label_to_dict(label: VertexLabel) -> dict:
    return {"role": type(label).__name__, **dataclasses.asdict(label)}


def label_from_dict(data: Mapping) -> VertexLabel:
    data = dict(data)
    try:
        cls = LABEL_TYPES[data.pop("role")]
    except KeyError as exc:
        raise GraphError(f"unknown vertex role in {data!r}") from exc
    return cls(**data)


# ---------------------------------------------------------------------------
# girth sentinel


class _Unbounded:
    """Girth of an acyclic graph.  Deliberately not orderable against ints."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Unbounded"

    __str__ = __repr__

    def __reduce__(self):
        return (_Unbounded, ())


UNBOUNDED = _Unbounded()


# ---------------------------------------------------------------------------
# the graph value


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    Build one with :class:`GraphBuilder` or :meth:`Graph.from_edges`.  Every
    constructor validates: no loops, no parallel edges, endpoints in range.
    """

    __slots__ = ("_n", "_adj", "_labels", "_masks", "_m")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]] = (),
        labels: Sequence[VertexLabel | None] | None = None,
    ):
        if n < 0:
            raise GraphError("negative vertex count")
        adj: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if v in adj[u]:
                raise GraphError(f"parallel edge ({u}, {v})")
            adj[u].add(v)
            adj[v].add(u)
            m += 1
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise GraphError(f"{len(labels)} labels for {n} vertices")
            if all(lab is None for lab in labels):
                labels = None
        self._n = n
        self._m = m
        self._adj = tuple(frozenset(s) for s in adj)
        self._labels = labels
        self._masks = None

    @classmethod
    def from_edges(cls, n, edges, labels=None) -> "Graph":
        return cls(n, edges, labels)

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        nodes = sorted(g.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), ((index[u], index[v]) for u, v in g.edges()))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self._n))
        g.add_edges_from(self.edges())
        return g

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return self._m

    def __len__(self) -> int:
        return self._n

    @property
    def vertices(self) -> range:
        return range(self._n)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        for u in range(self._n):
            for v in sorted(self._adj[u]):
                if u < v:
                    yield (u, v)

    @property
    def labels(self) -> tuple[VertexLabel | None, ...] | None:
        return self._labels

    def label(self, v: int) -> VertexLabel | None:
        return None if self._labels is None else self._labels[v]

    @property
    def masks(self) -> tuple[int, ...]:
        """Adjacency rows as integer bitsets (bit ``w`` of row ``v`` iff vw is an edge)."""
        if self._masks is None:
            self._masks = tuple(sum(1 << w for w in nb) for nb in self._adj)
        return self._masks

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._adj == other._adj and self._labels == other._labels

    def __hash__(self) -> int:
        return hash((self._n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self._m})"

    def same_edges(self, other: "Graph") -> bool:
        """Equality of vertex count and edge set, ignoring labels."""
        return self._n == other._n and self._adj == other._adj

    # -- derived graphs --------------------------------------------------

    def induced_subgraph(self, keep: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``keep``; returns it with the new-to-old vertex map."""
        old = sorted(set(keep))
        index = {v: i for i, v in enumerate(old)}
        edges = [(index[u], index[v]) for u, v in self.edges() if u in index and v in index]
        labels = None if self._labels is None else [self._labels[v] for v in old]
        return Graph(len(old), edges, labels), old

    def with_labels(self, labels: Sequence[VertexLabel | None] | None) -> "Graph":
        return Graph(self._n, self.edges(), labels)

    def _flood(self, start: int, allowed: int) -> int:
        """Bitset of vertices reachable from ``start`` inside the bitset ``allowed``."""
        masks = self.masks
        reached = frontier = 1 << start
        while frontier:
            nxt = 0
            while frontier:
                low = frontier & -frontier
                nxt |= masks[low.bit_length() - 1]
                frontier ^= low
            frontier = nxt & allowed & ~reached
            reached |= frontier
        return reached

    def is_connected_set(self, vertices: Iterable[int]) -> bool:
        """True iff ``vertices`` is non-empty and induces a connected subgraph."""
        vs = set(vertices)
        if not vs or min(vs) < 0 or max(vs) >= self._n:
            return False
        allowed = 0
        for v in vs:
            allowed |= 1 << v
        return self._flood(next(iter(vs)), allowed) == allowed

    def components(self, within: Iterable[int] | None = None) -> list[list[int]]:
        """Connected components (sorted lists, ordered by minimum vertex)."""
        allowed = set(range(self._n)) if within is None else set(within)
        seen: set[int] = set()
        comps = []
        for s in sorted(allowed):
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self._adj[u]:
                    if w in allowed and w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        full = (1 << self._n) - 1
        return self._n > 0 and self._flood(0, full) == full


class GraphBuilder:
    """Mutable accumulator for a :class:`Graph`.  Single-threaded use only."""

    def __init__(self):
        self._labels: list[VertexLabel | None] = []
        self._edges: set[tuple[int, int]] = set()

    @property
    def n(self) -> int:
        return len(self._labels)

    def add_vertex(self, label: VertexLabel | None = None) -> int:
        self._labels.append(label)
        return len(self._labels) - 1

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise GraphError(f"self-loop at {u}")
        e = (u, v) if u < v else (v, u)
        if e in self._edges:
            raise GraphError(f"parallel edge {e}")
        self._edges.add(e)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edges

    def build(self) -> Graph:
        return Graph(len(self._labels), sorted(self._edges), self._labels)


# ---------------------------------------------------------------------------
# small standard graphs


def complete_graph(k: int) -> Graph:
    return Graph(k, ((u, v) for u in range(k) for v in range(u + 1, k)))


def cycle_graph(k: int) -> Graph:
    if k < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph(k, ((i, (i + 1) % k) for i in range(k)))


def path_graph(k: int) -> Graph:
    return Graph(k, ((i, i + 1) for i in range(k - 1)))


def grid_graph(rows: int, cols: int) -> Graph:
    """``rows x cols`` grid; vertex ``r * cols + c``."""
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


def wheel_graph(rim: int) -> Graph:
    """Hub 0 joined to a rim cycle on ``1..rim``."""
    edges = [(0, i) for i in range(1, rim + 1)]
    edges += [(i, i % rim + 1) for i in range(1, rim + 1)]
    return Graph(rim + 1, edges)


# ---------------------------------------------------------------------------
# elementary operations


def girth(g: Graph) -> int | _Unbounded:
    """Number of vertices of a shortest cycle, or ``UNBOUNDED`` for a forest.

    Breadth-first search from every vertex; a non-tree edge ``uw`` met while
    searching from ``r`` closes a cycle of length at most
    ``dist[u] + dist[w] + 1``, and the minimum over all roots is exact.
    """
    best = None
    adj = [tuple(g.neighbors(v)) for v in g.vertices]
    for root in g.vertices:
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if best is not None and 2 * du >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = du + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    length = du + dist[w] + 1
                    if best is None or length < best:
                        best = length
    return UNBOUNDED if best is None else best


def subdivide(g: Graph, ell: int) -> Graph:
    """The ``ell``-subdivision: every edge becomes a path with ``ell + 1`` edges.

    Branching vertices keep their identifiers and labels.  New vertices are
    appended edge by edge (edges in lexicographic order) and labelled
    ``EdgeSubdivision(copy, a, b, index)`` with ``index`` counted from the
    smaller endpoint ``a``.
    """
    if ell < 1:
        raise GraphError("subdivision parameter must be at least 1")
    b = GraphBuilder()
    for v in g.vertices:
        b.add_vertex(g.label(v))
    for u, v in g.edges():
        lab = g.label(u)
        copy = getattr(lab, "copy", 0) if lab is not None else 0
        prev = u
        for i in range(1, ell + 1):
            x = b.add_vertex(EdgeSubdivision(copy, u, v, i))
            b.add_edge(prev, x)
            prev = x
        b.add_edge(prev, v)
    return b.build()


def _relabel_for_copy(label: VertexLabel | None, copy: int, offset: int) -> VertexLabel:
    if label is None:
        return Plain(copy)
    if isinstance(label, EdgeSubdivision):
        return dataclasses.replace(label, copy=copy, a=label.a + offset, b=label.b + offset)
    if hasattr(label, "copy"):
        return dataclasses.replace(label, copy=copy)
    return label


def disjoint_copies(g: Graph, k: int) -> Graph:
    """``k`` pairwise anti-complete copies; copy ``c`` occupies ``c*n .. c*n + n - 1``."""
    if k < 1:
        raise GraphError("need at least one copy")
    n = g.n
    edges = [(u + c * n, v + c * n) for c in range(k) for u, v in g.edges()]
    labels = [_relabel_for_copy(g.label(v), c, c * n) for c in range(k) for v in g.vertices]
    return Graph(n * k, edges, labels)


def contract_sets(g: Graph, parts: Sequence[Iterable[int]]) -> tuple[Graph, list[int]]:
    """Contract each (connected, pairwise disjoint) part to a single vertex.

    Returns the contracted graph and the old-to-new vertex map.  Part ``i``
    becomes vertex ``i``; the untouched vertices follow in increasing order.
    Loops and parallel edges are suppressed.
    """
    parts = [sorted(set(p)) for p in parts]
    owner: dict[int, int] = {}
    for i, part in enumerate(parts):
        if not part:
            raise GraphError(f"part {i} is empty")
        for v in part:
            if not 0 <= v < g.n:
                raise GraphError(f"part {i} contains unknown vertex {v}")
            if v in owner:
                raise GraphError(f"vertex {v} lies in parts {owner[v]} and {i}")
            owner[v] = i
        if not g.is_connected_set(part):
            raise GraphError(f"part {i} is not connected: {part}")
    new_of = [0] * g.n
    nxt = len(parts)
    for v in g.vertices:
        if v in owner:
            new_of[v] = owner[v]
        else:
            new_of[v] = nxt
            nxt += 1
    edges = {
        (min(new_of[u], new_of[v]), max(new_of[u], new_of[v]))
        for u, v in g.edges()
        if new_of[u] != new_of[v]
    }
    return Graph(nxt, sorted(edges)), new_of


ISOMORPHISM_GUARD = 30


def are_isomorphic(g1: Graph, g2: Graph, force: bool = False) -> bool:
    """Label-blind isomorphism test (VF2 via networkx).

    Refuses graphs above ``ISOMORPHISM_GUARD`` vertices unless ``force``.
    """
    if not force and max(g1.n, g2.n) > ISOMORPHISM_GUARD:
        raise SizeGuardError(
            f"isomorphism test limited to {ISOMORPHISM_GUARD} vertices; pass force=True"
        )
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if sorted(map(g1.degree, g1.vertices)) != sorted(map(g2.degree, g2.vertices)):
        return False
    return nx.is_isomorphic(g1.to_networkx(), g2.to_networkx())
