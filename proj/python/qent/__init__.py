"""Genuine multipartite negativity, XY-coupled qubit dynamics and state preparation."""

from ._qent import (
    SolverError,
    catalog_names,
    classify3,
    evolve,
    genuine_negativity,
    genuine_negativity_details,
    negativity,
    partial_trace,
    partial_transpose,
    project,
    random_biseparable,
    recipe,
    recipe_names,
    search_mapping,
    state,
    sweep,
    three_tangle,
)

__all__ = [
    "SolverError",
    "catalog_names",
    "classify3",
    "evolve",
    "genuine_negativity",
    "genuine_negativity_details",
    "negativity",
    "partial_trace",
    "partial_transpose",
    "project",
    "random_biseparable",
    "recipe",
    "recipe_names",
    "search_mapping",
    "state",
    "sweep",
    "three_tangle",
]
