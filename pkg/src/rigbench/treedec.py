"""Tree decompositions: verification, torsos, clique-sums, and the Helly property for subtrees."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

import networkx as nx

from .graph import Graph, GraphError
from .io import graph_from_dict, graph_to_dict


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags ``bags[x]`` of vertices of the decomposed graph, one per node ``x`` of ``tree``."""

    tree: Graph
    bags: Mapping[int, frozenset[int]]

    def __post_init__(self):
        object.__setattr__(
            self, "bags", {int(x): frozenset(b) for x, b in sorted(self.bags.items())}
        )

    def to_dict(self) -> dict:
        return {
            "tree": graph_to_dict(self.tree),
            "bags": {str(x): sorted(b) for x, b in self.bags.items()},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "TreeDecomposition":
        return cls(
            graph_from_dict(data["tree"]),
            {int(x): frozenset(b) for x, b in data["bags"].items()},
        )


@dataclass(frozen=True)
class TDVerdict:
    """Truthy iff the decomposition is valid; width and adhesion are set on success."""

    ok: bool
    reason: str | None = None
    detail: str | None = None
    width: int | None = None
    adhesion: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_tree(t: Graph) -> bool:
    return t.n >= 1 and t.m == t.n - 1 and t.is_connected()


def _require_tree(t: Graph) -> None:
    if not is_tree(t):
        raise GraphError("underlying graph of the decomposition is not a tree")


def verify_td(g: Graph, td: TreeDecomposition) -> TDVerdict:
    """Check both axioms; report width (max bag size - 1) and adhesion (max adjacent-bag overlap)."""
    _require_tree(td.tree)
    if set(td.bags) != set(td.tree.vertices):
        return TDVerdict(False, "missing bag", "every tree node needs exactly one bag")
    for x, bag in td.bags.items():
        bad = [v for v in bag if not 0 <= v < g.n]
        if bad:
            return TDVerdict(False, "unknown vertex", f"bag {x} contains {bad[0]}")
    for u, v in g.edges():
        if not any(u in b and v in b for b in td.bags.values()):
            return TDVerdict(False, "uncovered edge", f"{u}-{v}")
    for v in g.vertices:
        trace = [x for x, b in td.bags.items() if v in b]
        if not trace:
            return TDVerdict(False, "uncovered vertex", str(v))
        if not td.tree.is_connected_set(trace):
            return TDVerdict(False, "disconnected trace", f"nodes holding {v}")
    width = max(len(b) for b in td.bags.values()) - 1
    adhesion = max((len(td.bags[x] & td.bags[y]) for x, y in td.tree.edges()), default=0)
    return TDVerdict(True, width=width, adhesion=adhesion)


def trivial_td(g: Graph) -> TreeDecomposition:
    """The one-bag decomposition."""
    return TreeDecomposition(Graph(1, []), {0: frozenset(g.vertices)})


def torso(g: Graph, td: TreeDecomposition, node: int) -> tuple[Graph, list[int]]:
    """Torso at ``node``: the bag's induced subgraph with every adhesion set made a clique.

    Returns the torso and the list mapping its vertices to vertices of ``g``.
    """
    if node not in td.bags:
        raise GraphError(f"unknown tree node {node}")
    verdict = verify_td(g, td)
    if not verdict:
        raise GraphError(f"invalid decomposition: {verdict.reason} ({verdict.detail})")
    keep = sorted(td.bags[node])
    index = {v: i for i, v in enumerate(keep)}
    edges = set()
    for u, v in g.edges():
        if u in index and v in index:
            edges.add((index[u], index[v]))
    for y in td.tree.neighbors(node):
        shared = sorted(td.bags[node] & td.bags[y])
        for a, b in combinations(shared, 2):
            edges.add((index[a], index[b]))
    return Graph(len(keep), sorted(edges)), keep


def _check_clique(g: Graph, c: Sequence[int], name: str) -> None:
    if len(set(c)) != len(c):
        raise GraphError(f"{name} repeats a vertex")
    for v in c:
        if not 0 <= v < g.n:
            raise GraphError(f"{name} uses unknown vertex {v}")
    for a, b in combinations(c, 2):
        if not g.has_edge(a, b):
            raise GraphError(f"{name} is not a clique ({a} and {b} non-adjacent)")


def clique_sum(
    g1: Graph,
    c1: Sequence[int],
    g2: Graph,
    c2: Sequence[int],
    drop_edges=(),
) -> Graph:
    """Glue ``g2`` onto ``g1`` by identifying ``c2[i]`` with ``c1[i]``.

    ``drop_edges`` lists pairs of ``c1`` whose edge is removed afterwards.
    Vertices of ``g1`` keep their ids; the other vertices of ``g2`` follow
    in increasing order.
    """
    if len(c1) != len(c2):
        raise GraphError("cliques must have equal size")
    _check_clique(g1, c1, "c1")
    _check_clique(g2, c2, "c2")
    ident = dict(zip(c2, c1))
    mapping = {}
    nxt = g1.n
    for v in g2.vertices:
        if v in ident:
            mapping[v] = ident[v]
        else:
            mapping[v] = nxt
            nxt += 1
    edges = set(g1.edges())
    for u, v in g2.edges():
        a, b = mapping[u], mapping[v]
        edges.add((min(a, b), max(a, b)))
    members = set(c1)
    for a, b in drop_edges:
        if a not in members or b not in members or a == b:
            raise GraphError(f"dropped pair {a}-{b} is not a pair of c1")
        edges.discard((min(a, b), max(a, b)))
    return Graph(nxt, sorted(edges))


def helly_common_node(
    tree: Graph, subtrees: Sequence, check: bool = True
) -> tuple[int | None, tuple[int, int] | None]:
    """A node common to all subtrees, or ``(None, (i, j))`` with subtrees ``i`` and ``j`` disjoint.

    Subtrees of a tree have the Helly property, so pairwise intersection is
    enough for a common node; the node returned is the smallest one.
    ``check=False`` skips input validation for callers that already did it.
    """
    sets = [frozenset(s) for s in subtrees]
    if check:
        _require_tree(tree)
        for i, s in enumerate(sets):
            if any(not 0 <= x < tree.n for x in s):
                raise GraphError(f"subtree {i} uses an unknown node")
            if not tree.is_connected_set(s):
                raise GraphError(f"subtree {i} is empty or disconnected")
    if not sets:
        raise GraphError("need at least one subtree")
    for i, j in combinations(range(len(sets)), 2):
        if not sets[i] & sets[j]:
            return None, (i, j)
    common = frozenset.intersection(*sets)
    if not common:
        raise AssertionError("pairwise-intersecting subtrees without a common node")
    return min(common), None


def td_from_networkx(t: nx.Graph, bags: Mapping) -> TreeDecomposition:
    """Build from a networkx tree whose nodes are arbitrary; nodes are renumbered in sorted order."""
    nodes = sorted(t.nodes)
    index = {x: i for i, x in enumerate(nodes)}
    tree = Graph(len(nodes), sorted((min(index[a], index[b]), max(index[a], index[b])) for a, b in t.edges))
    return TreeDecomposition(tree, {index[x]: frozenset(bags[x]) for x in nodes})
