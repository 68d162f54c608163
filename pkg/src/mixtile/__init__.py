"""Exact tools for mixed graph tilings: chromatic profiles, fractional tilings,
clique hypergraph structure, flexible colourings, allocations and certificates."""

from .graph import (Colouring, Graph, TiledGuest, bottle_graph, chromatic_profile, guest_profile,
                    is_fcr, parse_graph, parse_guest)

__version__ = "0.1.0"

__all__ = [
    "Colouring", "Graph", "TiledGuest", "bottle_graph", "chromatic_profile", "guest_profile",
    "is_fcr", "parse_graph", "parse_guest", "__version__",
]
