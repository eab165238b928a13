"""Directed recommendation graph with per-edge provenance labels.

Nodes are dense integer ids ``0..n_nodes-1``; an optional name table maps
them to external identifiers (e.g. video ids from a crawl dump).  Each
ordered ``(src, dst)`` pair carries at most one edge; repeated observations
of the same recommendation increment the edge weight instead of creating
parallel edges.

Graphs are built through :class:`GraphBuilder` and frozen into immutable
:class:`RecGraph` snapshots.  All analysis code takes frozen graphs, which
are plain read-only numpy arrays and safe to share across threads.
"""
from __future__ import annotations

import enum
from typing import Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from .exceptions import InvalidEdge, InvalidParams, LabelConflict


class EdgeLabel(enum.Enum):
    """Provenance of a recommendation edge.

    Synthetic graphs carry only OFFICIAL and BIASED (the ground truth);
    ingested crawl dumps may additionally contain UNKNOWN for edges whose
    provenance the crawler could not determine.
    """

    OFFICIAL = 0
    BIASED = 1
    UNKNOWN = 2

    @classmethod
    def from_string(cls, text: str) -> "EdgeLabel":
        try:
            return _LABELS_BY_NAME[text.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown edge label {text!r}") from None

    def __str__(self) -> str:
        return self.name.lower()


_LABELS_BY_NAME = {label.name.lower(): label for label in EdgeLabel}


class Edge(NamedTuple):
    src: int
    dst: int
    label: EdgeLabel
    weight: int


def _merge_labels(old: EdgeLabel, new: EdgeLabel) -> EdgeLabel:
    """Combine labels of repeated observations of the same edge.

    UNKNOWN upgrades to either specific label; OFFICIAL vs BIASED is a
    ground-truth contradiction and raises.
    """
    if old is new or new is EdgeLabel.UNKNOWN:
        return old
    if old is EdgeLabel.UNKNOWN:
        return new
    raise LabelConflict(f"edge relabeled {old} -> {new}")


class GraphBuilder:
    """Single-writer accumulator for :class:`RecGraph` construction."""

    def __init__(
        self,
        n_nodes: int,
        metadata: Mapping[str, str] | None = None,
        node_names: Sequence[str] | None = None,
    ):
        if n_nodes < 1:
            raise InvalidEdge(f"graph needs at least one node, got {n_nodes}")
        if node_names is not None:
            if len(node_names) != n_nodes:
                raise ValueError("node_names length must equal n_nodes")
            if len(set(node_names)) != n_nodes:
                raise ValueError("node names must be unique")
        self.n_nodes = n_nodes
        self.metadata = dict(metadata or {})
        self.node_names = list(node_names) if node_names is not None else None
        # (src, dst) -> [label, weight]
        self._edges: dict[tuple[int, int], list] = {}

    def add_edge(self, src: int, dst: int, label: EdgeLabel, count: int = 1) -> None:
        """Record ``count`` observations of the recommendation src -> dst."""
        if not (0 <= src < self.n_nodes and 0 <= dst < self.n_nodes):
            raise InvalidEdge(
                f"edge ({src}, {dst}) out of range for {self.n_nodes} nodes"
            )
        if src == dst:
            raise InvalidEdge(f"self-recommendation ({src}, {dst}) rejected")
        if count < 1:
            raise InvalidEdge(f"edge count must be >= 1, got {count}")
        entry = self._edges.get((src, dst))
        if entry is None:
            self._edges[(src, dst)] = [label, count]
        else:
            entry[0] = _merge_labels(entry[0], label)
            entry[1] += count

    @property
    def n_edges(self) -> int:
        return len(self._edges)

    def freeze(self) -> "RecGraph":
        """Snapshot the current state into an immutable graph."""
        keys = sorted(self._edges)
        src = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
        dst = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
        labels = np.fromiter(
            (self._edges[k][0].value for k in keys), dtype=np.int8, count=len(keys)
        )
        weights = np.fromiter(
            (self._edges[k][1] for k in keys), dtype=np.int64, count=len(keys)
        )
        return RecGraph(
            self.n_nodes, src, dst, labels, weights, self.metadata, self.node_names
        )


class RecGraph:
    """Immutable directed labeled multigraph-with-weights snapshot.

    Edge arrays are sorted by ``(src, dst)``, so the out-adjacency CSR
    offsets index directly into them: the out-edges of node ``u`` are edge
    indices ``out_indptr[u]:out_indptr[u+1]``.
    """

    __slots__ = (
        "n_nodes",
        "src",
        "dst",
        "label_codes",
        "weights",
        "out_indptr",
        "_in_order",
        "_in_indptr",
        "_metadata",
        "_node_names",
    )

    def __init__(self, n_nodes, src, dst, label_codes, weights, metadata, node_names):
        self.n_nodes = int(n_nodes)
        self.src = src
        self.dst = dst
        self.label_codes = label_codes
        self.weights = weights
        # edges arrive sorted by (src, dst); counts per src give the CSR offsets
        counts = np.bincount(src, minlength=self.n_nodes) if len(src) else np.zeros(
            self.n_nodes, dtype=np.int64
        )
        self.out_indptr = np.concatenate(([0], np.cumsum(counts)))
        self._in_order = None
        self._in_indptr = None
        self._metadata = dict(metadata or {})
        self._node_names = tuple(node_names) if node_names is not None else None
        for arr in (self.src, self.dst, self.label_codes, self.weights, self.out_indptr):
            arr.setflags(write=False)

    # ---- basic accessors ---------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.src)

    @property
    def metadata(self) -> dict[str, str]:
        return dict(self._metadata)

    @property
    def node_names(self) -> tuple[str, ...] | None:
        return self._node_names

    def edge_at(self, index: int) -> Edge:
        return Edge(
            int(self.src[index]),
            int(self.dst[index]),
            EdgeLabel(int(self.label_codes[index])),
            int(self.weights[index]),
        )

    def edges(self) -> Iterator[Edge]:
        for i in range(self.n_edges):
            yield self.edge_at(i)

    def has_edge(self, src: int, dst: int) -> bool:
        return self._edge_index(src, dst) >= 0

    def _edge_index(self, src: int, dst: int) -> int:
        lo, hi = self.out_indptr[src], self.out_indptr[src + 1]
        pos = lo + np.searchsorted(self.dst[lo:hi], dst)
        if pos < hi and self.dst[pos] == dst:
            return int(pos)
        return -1

    def edge_label(self, src: int, dst: int) -> EdgeLabel:
        idx = self._edge_index(src, dst)
        if idx < 0:
            raise KeyError(f"no edge ({src}, {dst})")
        return EdgeLabel(int(self.label_codes[idx]))

    def out_neighbors(self, node: int) -> np.ndarray:
        return self.dst[self.out_indptr[node] : self.out_indptr[node + 1]]

    def out_degree(self, node: int) -> int:
        return int(self.out_indptr[node + 1] - self.out_indptr[node])

    def _ensure_in_index(self) -> None:
        if self._in_order is None:
            order = np.lexsort((self.src, self.dst))
            counts = (
                np.bincount(self.dst, minlength=self.n_nodes)
                if self.n_edges
                else np.zeros(self.n_nodes, dtype=np.int64)
            )
            self._in_order = order
            self._in_indptr = np.concatenate(([0], np.cumsum(counts)))

    def in_neighbors(self, node: int) -> np.ndarray:
        self._ensure_in_index()
        lo, hi = self._in_indptr[node], self._in_indptr[node + 1]
        return self.src[self._in_order[lo:hi]]

    def in_degree(self, node: int) -> int:
        self._ensure_in_index()
        return int(self._in_indptr[node + 1] - self._in_indptr[node])

    def in_degrees(self) -> np.ndarray:
        """In-degree of every node (distinct in-neighbors, weights ignored)."""
        return np.bincount(self.dst, minlength=self.n_nodes)

    def out_degrees(self) -> np.ndarray:
        return np.diff(self.out_indptr)

    # ---- label queries and projections -----------------------------------

    def label_count(self, label: EdgeLabel) -> int:
        return int(np.count_nonzero(self.label_codes == label.value))

    def remove_labeled(self, label: EdgeLabel) -> "RecGraph":
        """A new graph on the same node set without edges carrying ``label``."""
        keep = self.label_codes != label.value
        return RecGraph(
            self.n_nodes,
            self.src[keep].copy(),
            self.dst[keep].copy(),
            self.label_codes[keep].copy(),
            self.weights[keep].copy(),
            self._metadata,
            self._node_names,
        )

    def in_degree_tail_count(self, threshold: int) -> int:
        """How many nodes have strictly more than ``threshold`` in-neighbors."""
        if threshold < 0:
            raise InvalidParams(f"threshold must be >= 0, got {threshold}")
        return int(np.count_nonzero(self.in_degrees() > threshold))

    def __repr__(self) -> str:
        return f"RecGraph(nodes={self.n_nodes}, edges={self.n_edges})"


def remove_labeled(graph: RecGraph, label: EdgeLabel) -> RecGraph:
    """Functional alias for :meth:`RecGraph.remove_labeled`."""
    return graph.remove_labeled(label)
