"""Structural diagnostics: path-length spectra, edge betweenness, communities.

Path lengths are unweighted hop counts on the *directed* graph, since
recommendation traversal is directional. Edge betweenness deliberately
works on the undirected projection (direction and weights dropped): a
covert edge creates a shortcut regardless of its orientation, and the
symmetric score is what the detection stage ranks. Community detection
runs Louvain on the symmetrized weighted graph.

Per-source sweeps run on a thread pool in fixed blocks of
``SOURCE_BLOCK`` sources, reduced in block order, so every result is
bit-identical whatever the worker count (see RECOGRAPH_THREADS).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import networkx as nx
import numpy as np

from ._kernels import SOURCE_BLOCK, bfs_distance_counts, brandes_edge_scores
from .exceptions import InvalidParams
from .graph import RecGraph
from .utils import effective_threads
from .validation import check_fraction, check_graph, check_positive_int, check_seed

ALL = "all"


class Sample(NamedTuple):
    """Seeded uniform source sample (without replacement)."""

    size: int
    seed: int


def _resolve_sources(graph: RecGraph, sources) -> np.ndarray:
    if isinstance(sources, str) and sources == ALL:
        return np.arange(graph.n_nodes, dtype=np.int64)
    if isinstance(sources, Sample):
        size = check_positive_int(sources.size, "sample size")
        if size > graph.n_nodes:
            raise InvalidParams(
                f"sample size {size} exceeds node count {graph.n_nodes}"
            )
        rng = np.random.default_rng(check_seed(sources.seed))
        picked = rng.choice(graph.n_nodes, size=size, replace=False)
        return np.sort(picked).astype(np.int64)
    raise InvalidParams(f"sources must be ALL or Sample(size, seed), got {sources!r}")


def _blocked(sources: np.ndarray):
    for start in range(0, len(sources), SOURCE_BLOCK):
        yield sources[start : start + SOURCE_BLOCK]


def _map_blocks(worker, sources: np.ndarray, threads) -> list:
    """Run ``worker`` over source blocks, results in block order."""
    blocks = list(_blocked(sources))
    n_workers = min(effective_threads(threads), max(len(blocks), 1))
    if n_workers <= 1 or len(blocks) <= 1:
        return [worker(block) for block in blocks]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(worker, blocks))


# ---- path lengths ------------------------------------------------------------


@dataclass(frozen=True)
class PathLengthHistogram:
    """Hop-distance spectrum over ordered node pairs.

    ``counts[d]`` is the number of ordered (source, target) pairs at
    directed distance d >= 1; pairs with no path are tallied in
    ``unreachable_pairs``. Together they cover n_sources * (n - 1) pairs.
    """

    counts: dict[int, int]
    unreachable_pairs: int
    n_sources: int
    n_nodes: int

    @property
    def finite_pairs(self) -> int:
        return sum(self.counts.values())

    def mean_finite_distance(self) -> float:
        """Mean hop distance over reachable pairs (NaN if none)."""
        total = self.finite_pairs
        if total == 0:
            return math.nan
        return sum(d * c for d, c in self.counts.items()) / total

    def as_rows(self) -> list[tuple[int, int]]:
        return sorted(self.counts.items())


def path_length_distribution(
    graph: RecGraph, sources=ALL, threads: int | None = None
) -> PathLengthHistogram:
    """Histogram directed BFS distances from each selected source."""
    check_graph(graph)
    source_ids = _resolve_sources(graph, sources)
    n = graph.n_nodes
    indptr, indices = graph.out_indptr, graph.dst

    def worker(block):
        return bfs_distance_counts(indptr, indices, block, n)

    totals = np.zeros(n, dtype=np.int64)
    unreachable = 0
    for counts, missing in _map_blocks(worker, source_ids, threads):
        totals += counts
        unreachable += int(missing)
    observed = {int(d): int(c) for d, c in enumerate(totals) if c > 0}
    return PathLengthHistogram(
        counts=observed,
        unreachable_pairs=unreachable,
        n_sources=len(source_ids),
        n_nodes=n,
    )


# ---- edge betweenness ----------------------------------------------------------


def _undirected_csr(graph: RecGraph):
    """Project to the undirected support and lay it out as CSR.

    Returns (indptr, indices, edge_ids, directed_to_undirected, n_und):
    every undirected edge occupies two CSR slots tagged with its id, and
    ``directed_to_undirected[i]`` is the undirected id of directed edge i.
    """
    n = graph.n_nodes
    low = np.minimum(graph.src, graph.dst)
    high = np.maximum(graph.src, graph.dst)
    keys, inverse = np.unique(low * n + high, return_inverse=True)
    n_und = len(keys)
    a = keys // n
    b = keys % n
    rows = np.concatenate([a, b])
    cols = np.concatenate([b, a])
    ids = np.concatenate([np.arange(n_und), np.arange(n_und)])
    order = np.lexsort((cols, rows))
    indptr = np.concatenate(
        ([0], np.cumsum(np.bincount(rows, minlength=n)))
    ).astype(np.int64)
    return indptr, cols[order], ids[order], inverse, n_und


def edge_betweenness(
    graph: RecGraph, sources=ALL, threads: int | None = None
) -> np.ndarray:
    """Symmetric shortest-path betweenness of every edge.

    Scores are raw ordered-pair accumulations on the undirected
    projection; each directed edge inherits the score of its undirected
    support. With a ``Sample`` source set the partial sum is rescaled by
    n / sample-size, an unbiased estimate of the full score. The result
    aligns with the graph's edge arrays.
    """
    check_graph(graph)
    if graph.n_edges == 0:
        return np.zeros(0, dtype=np.float64)
    source_ids = _resolve_sources(graph, sources)
    indptr, indices, edge_ids, directed_map, n_und = _undirected_csr(graph)
    n = graph.n_nodes

    def worker(block):
        return brandes_edge_scores(indptr, indices, edge_ids, block, n, n_und)

    undirected_scores = np.zeros(n_und, dtype=np.float64)
    for partial in _map_blocks(worker, source_ids, threads):
        undirected_scores += partial
    if len(source_ids) < n:
        undirected_scores *= n / len(source_ids)
    return undirected_scores[directed_map]


# ---- communities ---------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Node -> community assignment, canonicalized for stable output.

    Communities are numbered by their smallest member, so two runs that
    find the same grouping produce identical labels.
    """

    membership: np.ndarray
    sizes: tuple[int, ...]

    @property
    def n_communities(self) -> int:
        return len(self.sizes)

    def community_of(self, node: int) -> int:
        return int(self.membership[node])


def detect_communities(
    graph: RecGraph, resolution: float = 1.0, seed: int = 0
) -> Partition:
    """Louvain modularity communities on the symmetrized weighted graph."""
    check_graph(graph)
    if resolution <= 0:
        raise InvalidParams(f"resolution must be > 0, got {resolution}")
    seed = check_seed(seed)
    sym = nx.Graph()
    sym.add_nodes_from(range(graph.n_nodes))
    for i in range(graph.n_edges):
        u, v, w = int(graph.src[i]), int(graph.dst[i]), int(graph.weights[i])
        if sym.has_edge(u, v):
            sym[u][v]["weight"] += w
        else:
            sym.add_edge(u, v, weight=w)
    communities = nx.community.louvain_communities(
        sym, weight="weight", resolution=resolution, seed=seed
    )
    ordered = sorted(communities, key=min)
    membership = np.empty(graph.n_nodes, dtype=np.int64)
    for index, members in enumerate(ordered):
        for node in members:
            membership[node] = index
    membership.setflags(write=False)
    return Partition(
        membership=membership, sizes=tuple(len(c) for c in ordered)
    )


def large_community_count(
    partition: Partition, graph: RecGraph, fraction: float
) -> int:
    """Communities holding at least ``fraction`` of the graph's nodes."""
    check_graph(graph)
    fraction = check_fraction(fraction, "fraction")
    if fraction == 0:
        raise InvalidParams("fraction must be > 0")
    threshold = fraction * graph.n_nodes
    return sum(1 for size in partition.sizes if size >= threshold)
