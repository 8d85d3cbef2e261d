"""Graph interchange: graph6, DIMACS edge format, and labelled JSON.

Only JSON carries vertex labels; graph6 and DIMACS round-trip the vertex count
and edge set exactly.
"""

from __future__ import annotations

import json
from typing import Any

import networkx as nx

from .graph import Graph, GraphError, label_from_dict, label_to_dict


def to_graph6(g: Graph) -> str:
    return nx.to_graph6_bytes(g.to_networkx(), header=False).decode("ascii").strip()


def from_graph6(text: str) -> Graph:
    text = text.strip()
    if text.startswith(">>graph6<<"):
        text = text[len(">>graph6<<"):]
    try:
        nxg = nx.from_graph6_bytes(text.encode("ascii"))
    except (ValueError, nx.NetworkXError) as exc:
        raise GraphError(f"bad graph6 string: {exc}") from exc
    return Graph(nxg.number_of_nodes(), nxg.edges())


def to_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.m}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> Graph:
    n = None
    declared_m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "edge":
                raise GraphError(f"line {lineno}: expected 'p edge n m'")
            n, declared_m = int(parts[2]), int(parts[3])
        elif parts[0] == "e":
            if n is None:
                raise GraphError(f"line {lineno}: edge before problem line")
            if len(parts) != 3:
                raise GraphError(f"line {lineno}: expected 'e u v'")
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
        else:
            raise GraphError(f"line {lineno}: unknown line type {parts[0]!r}")
    if n is None:
        raise GraphError("missing 'p edge' line")
    if declared_m != len(edges):
        raise GraphError(f"header declares {declared_m} edges, found {len(edges)}")
    return Graph(n, edges)


def graph_to_dict(g: Graph) -> dict[str, Any]:
    vertices = []
    for v in g.vertices:
        entry: dict[str, Any] = {"id": v}
        lab = g.label(v)
        if lab is not None:
            entry["label"] = label_to_dict(lab)
        vertices.append(entry)
    return {"vertices": vertices, "edges": [[u, v] for u, v in g.edges()]}


def graph_from_dict(data: dict[str, Any]) -> Graph:
    vertices = data["vertices"]
    ids = [entry["id"] for entry in vertices]
    if ids != list(range(len(ids))):
        raise GraphError("vertex ids must be 0..n-1 in order")
    labels = [
        label_from_dict(entry["label"]) if "label" in entry else None for entry in vertices
    ]
    return Graph(len(ids), (tuple(e) for e in data["edges"]), labels)


def dumps(obj: Any) -> str:
    """Deterministic JSON text (sorted keys, fixed separators)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def to_json(g: Graph) -> str:
    return dumps(graph_to_dict(g))


def from_json(text: str) -> Graph:
    return graph_from_dict(json.loads(text))


FORMATS = ("graph6", "dimacs", "json")


def write_graph(g: Graph, fmt: str) -> str:
    if fmt == "graph6":
        return to_graph6(g) + "\n"
    if fmt == "dimacs":
        return to_dimacs(g)
    if fmt == "json":
        return to_json(g) + "\n"
    raise GraphError(f"unknown format {fmt!r}")


def read_graph(text: str, fmt: str | None = None) -> Graph:
    """Parse ``text``; with ``fmt=None`` the format is sniffed.

    A JSON construction bundle is accepted too and yields its graph.
    """
    stripped = text.lstrip()
    if fmt is None:
        if stripped.startswith("{"):
            fmt = "json"
        elif stripped.startswith(("p ", "c ", "p\t")) or stripped.startswith("c\n"):
            fmt = "dimacs"
        else:
            fmt = "graph6"
    if fmt == "json":
        data = json.loads(text)
        if "graph" in data and "vertices" not in data:
            data = data["graph"]
        return graph_from_dict(data)
    if fmt == "dimacs":
        return from_dimacs(text)
    if fmt == "graph6":
        return from_graph6(text)
    raise GraphError(f"unknown format {fmt!r}")
