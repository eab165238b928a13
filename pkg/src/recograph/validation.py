"""Input validation helpers shared across the package."""
from __future__ import annotations

import numpy as np

from .exceptions import InvalidParams
from .graph import RecGraph


def check_graph(graph) -> RecGraph:
    if not isinstance(graph, RecGraph):
        raise TypeError(f"expected RecGraph, got {type(graph).__name__}")
    return graph


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    try:
        as_int = int(value)
    except (TypeError, ValueError):
        raise InvalidParams(f"{name} must be an integer, got {value!r}") from None
    if as_int != value or as_int < minimum:
        raise InvalidParams(f"{name} must be an integer >= {minimum}, got {value!r}")
    return as_int


def check_fraction(value, name: str) -> float:
    try:
        as_float = float(value)
    except (TypeError, ValueError):
        raise InvalidParams(f"{name} must be a number, got {value!r}") from None
    if not 0.0 <= as_float <= 1.0:
        raise InvalidParams(f"{name} must lie in [0, 1], got {value!r}")
    return as_float


def check_seed(seed) -> int:
    """Validate a 64-bit unsigned RNG seed."""
    try:
        as_int = int(seed)
    except (TypeError, ValueError):
        raise InvalidParams(f"seed must be an integer, got {seed!r}") from None
    if as_int != seed or not 0 <= as_int < 2**64:
        raise InvalidParams(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return as_int


def check_sources(sources, n_nodes: int) -> np.ndarray:
    """Validate an explicit array of BFS source nodes."""
    arr = np.asarray(sources, dtype=np.int64)
    if arr.ndim != 1 or len(arr) == 0:
        raise InvalidParams("sources must be a non-empty 1-d array of node ids")
    if arr.min() < 0 or arr.max() >= n_nodes:
        raise InvalidParams(f"source ids must lie in [0, {n_nodes})")
    if len(np.unique(arr)) != len(arr):
        raise InvalidParams("source ids must be distinct")
    return arr
