"""Constructions and exact checks around region intersection graphs, minors and apex grids."""

from .graph import UNBOUNDED, Graph, GraphError, SizeGuardError, girth, subdivide
from .minors import Kind, MinorModel, SearchOutcome, Status, find_model, verify_model

__version__ = "0.1.0"

__all__ = [
    "UNBOUNDED",
    "Graph",
    "GraphError",
    "Kind",
    "MinorModel",
    "SearchOutcome",
    "SizeGuardError",
    "Status",
    "find_model",
    "girth",
    "subdivide",
    "verify_model",
]
