"""User-side observation of a recommender by bounded breadth-first crawling.

A crawl starts from one seed item and repeatedly asks an oracle "what do
you recommend next to this item?", expanding outward hop by hop. Items
first seen at hop ``depth`` are recorded but not queried, so they appear
with out-degree 0. Every returned recommendation becomes an edge, even
when it points at an already-known item; those back-references are exactly
what makes real recommendation neighborhoods much smaller than the k-ary
tree bound, which :func:`redundancy` quantifies.

Oracles are deterministic within a session, so queries are issued
sequentially in discovery order and the observed graph is reproducible.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .exceptions import CrawlInterrupted, InvalidParams
from .graph import EdgeLabel, GraphBuilder, RecGraph
from .io import read_graph_tsv
from .validation import check_positive_int


def tree_bound(k: int, h: int) -> int:
    """Node count of a full k-ary recommendation tree of depth ``h``.

    Equals 1 + k + k^2 + ... + k^h = (k^(h+1) - 1) / (k - 1), computed in
    exact integer arithmetic.
    """
    k = check_positive_int(k, "k", minimum=2)
    h = check_positive_int(h, "h", minimum=0)
    return (k ** (h + 1) - 1) // (k - 1)


def redundancy_value(node_count: int, fanout: int, depth: int) -> float:
    """Fraction of the k-ary tree bound missing from an observation."""
    node_count = check_positive_int(node_count, "node_count")
    bound = tree_bound(fanout, depth)
    if node_count > bound:
        raise InvalidParams(
            f"node_count {node_count} exceeds tree_bound({fanout}, {depth})={bound}"
        )
    return 1.0 - node_count / bound


class RecommendationOracle(ABC):
    """Query interface of a recommender as seen from the user side."""

    @property
    @abstractmethod
    def fanout(self) -> int:
        """Largest number of recommendations returned per item."""

    @abstractmethod
    def recommendations(self, item: Hashable) -> Sequence[tuple[Hashable, EdgeLabel]]:
        """Ordered recommendations for ``item`` as (target, label) pairs."""


class GraphOracle(RecommendationOracle):
    """Serves a frozen :class:`RecGraph` as a recommender; items are node ids."""

    def __init__(self, graph: RecGraph):
        self._graph = graph
        degrees = graph.out_degrees()
        self._fanout = int(degrees.max()) if len(degrees) else 0

    @property
    def fanout(self) -> int:
        return self._fanout

    @property
    def graph(self) -> RecGraph:
        return self._graph

    def recommendations(self, item):
        item = int(item)
        if not 0 <= item < self._graph.n_nodes:
            raise KeyError(f"item {item} not in graph")
        lo = self._graph.out_indptr[item]
        hi = self._graph.out_indptr[item + 1]
        return [
            (int(self._graph.dst[i]), EdgeLabel(int(self._graph.label_codes[i])))
            for i in range(lo, hi)
        ]


class DumpOracle(RecommendationOracle):
    """Replays a crawl-dump file; items are external names when available."""

    def __init__(self, path, names_path=None):
        graph = read_graph_tsv(path, names_path=names_path)
        names = (
            list(graph.node_names)
            if graph.node_names is not None
            else [str(i) for i in range(graph.n_nodes)]
        )
        self._keys = names
        self._adjacency: dict[Hashable, list] = {name: [] for name in names}
        for i in range(graph.n_edges):
            self._adjacency[names[int(graph.src[i])]].append(
                (names[int(graph.dst[i])], EdgeLabel(int(graph.label_codes[i])))
            )
        self.meta = graph.metadata
        if "fanout" in self.meta:
            self._fanout = int(self.meta["fanout"])
        else:
            degrees = graph.out_degrees()
            self._fanout = int(degrees.max()) if len(degrees) else 0

    @property
    def fanout(self) -> int:
        return self._fanout

    def recommendations(self, item):
        try:
            return self._adjacency[item]
        except KeyError:
            raise KeyError(f"item {item!r} not in dump") from None


@dataclass(frozen=True)
class ObservedGraph:
    """One user's bounded view of a recommender.

    Node ids are dense in discovery order; ``graph.node_names`` maps them
    back to the oracle's item keys. ``frontier_sizes[j]`` counts the items
    first discovered at hop ``j`` (index 0 is the seed itself).
    """

    graph: RecGraph
    seed: Hashable
    depth: int
    fanout: int
    frontier_sizes: tuple[int, ...] = field(default_factory=tuple)

    @property
    def node_count(self) -> int:
        return self.graph.n_nodes

    @property
    def edge_count(self) -> int:
        return self.graph.n_edges

    def redundancy(self) -> float:
        return redundancy_value(self.node_count, self.fanout, self.depth)


def redundancy(observed: ObservedGraph) -> float:
    """Functional alias for :meth:`ObservedGraph.redundancy`."""
    return observed.redundancy()


def _freeze_observation(order, edges, seed, depth, fanout, frontier_sizes):
    builder = GraphBuilder(
        len(order),
        metadata={
            "seed": str(seed),
            "depth": str(depth),
            "fanout": str(fanout),
        },
        node_names=[str(key) for key in order],
    )
    for src, dst, label in edges:
        builder.add_edge(src, dst, label)
    return ObservedGraph(
        graph=builder.freeze(),
        seed=seed,
        depth=depth,
        fanout=fanout,
        frontier_sizes=tuple(frontier_sizes),
    )


def crawl(oracle: RecommendationOracle, seed: Hashable, depth: int) -> ObservedGraph:
    """Breadth-first observation of ``oracle`` from ``seed``, ``depth`` hops out.

    Each item is queried at most once, at the hop where it was first
    discovered; items first discovered at hop ``depth`` are not queried.
    Raises :class:`CrawlInterrupted` carrying the partial observation if
    the oracle fails on some item.
    """
    depth = check_positive_int(depth, "depth", minimum=0)
    ids = {seed: 0}
    order = [seed]
    edges: list[tuple[int, int, EdgeLabel]] = []
    frontier_sizes = [1] + [0] * depth
    frontier = [seed]
    fanout = oracle.fanout
    for hop in range(depth):
        next_frontier = []
        for item in frontier:
            try:
                recs = oracle.recommendations(item)
            except Exception as exc:
                partial = _freeze_observation(
                    order, edges, seed, depth, fanout, frontier_sizes
                )
                raise CrawlInterrupted(partial, item, exc) from exc
            src_id = ids[item]
            for target, label in recs:
                target_id = ids.get(target)
                if target_id is None:
                    target_id = len(order)
                    ids[target] = target_id
                    order.append(target)
                    next_frontier.append(target)
                    frontier_sizes[hop + 1] += 1
                edges.append((src_id, target_id, label))
        frontier = next_frontier
        if not frontier:
            break
    return _freeze_observation(order, edges, seed, depth, fanout, frontier_sizes)
