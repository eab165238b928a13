"""Bias tagging: rank edges by centrality and flag the top of the list.

The working hypothesis is that covertly injected edges shortcut the
organic topology, which drives their shortest-path betweenness up. The
:class:`BetweennessEdgeDetector` wraps that pipeline in an
estimator-style interface; the module functions expose the pieces.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from . import metrics, topology
from .exceptions import IncompleteScores
from .graph import Edge, RecGraph
from .validation import check_graph, check_seed


@dataclass(frozen=True)
class EdgeRanking:
    """Edges ordered best-first by score.

    ``order[r]`` is the edge index (into the graph's edge arrays) at rank
    r; ``scores`` stays aligned with the edge arrays, not with the
    ranking. Ties in score are ordered by ascending (src, dst).
    """

    order: np.ndarray
    scores: np.ndarray

    def __post_init__(self):
        self.order.setflags(write=False)
        self.scores.setflags(write=False)

    def __len__(self) -> int:
        return len(self.order)

    def ranked_edges(self, graph: RecGraph) -> Iterator[tuple[Edge, float]]:
        for index in self.order:
            yield graph.edge_at(int(index)), float(self.scores[index])


def _scores_as_array(graph: RecGraph, scores) -> np.ndarray:
    if isinstance(scores, Mapping):
        table = np.empty(graph.n_edges, dtype=np.float64)
        for i in range(graph.n_edges):
            key = (int(graph.src[i]), int(graph.dst[i]))
            if key not in scores:
                raise IncompleteScores(f"no score for edge {key}")
            table[i] = scores[key]
    else:
        table = np.asarray(scores, dtype=np.float64)
    if table.shape != (graph.n_edges,):
        raise IncompleteScores(
            f"scores cover {table.shape} entries, graph has {graph.n_edges} edges"
        )
    if np.isnan(table).any():
        raise IncompleteScores("scores contain NaN")
    return table


def rank_edges(graph: RecGraph, scores) -> EdgeRanking:
    """Order all edges by descending score, ties by (src, dst) ascending.

    ``scores`` is either an array aligned with the graph's edge arrays or
    a mapping from (src, dst) to score covering every edge.
    """
    check_graph(graph)
    table = _scores_as_array(graph, scores)
    order = np.lexsort((graph.dst, graph.src, -table))
    return EdgeRanking(order=order, scores=table)


def random_baseline(graph: RecGraph, seed: int) -> EdgeRanking:
    """Uniformly random edge ranking; the chance reference for any detector."""
    check_graph(graph)
    rng = np.random.default_rng(check_seed(seed))
    permutation = rng.permutation(graph.n_edges)
    # score = reverse rank, so rank_edges reproduces exactly this order
    scores = np.empty(graph.n_edges, dtype=np.float64)
    scores[permutation] = np.arange(graph.n_edges, 0, -1, dtype=np.float64)
    return EdgeRanking(order=permutation.astype(np.int64), scores=scores)


class BetweennessEdgeDetector(BaseEstimator):
    """Flags likely-injected edges by symmetric edge betweenness.

    Transductive: :meth:`fit` analyses one graph and predictions refer to
    that graph's edges. ``fraction`` is the share of edges flagged, like
    the contamination rate of outlier detectors.

    Parameters
    ----------
    fraction : float, default=0.125
        Top share of the ranking labeled as biased by :meth:`predict`.
    sources : ``topology.ALL`` or ``topology.Sample``, default=ALL
        Source set for the betweenness sweep.
    threads : int or None, default=None
        Worker cap for the sweep; None defers to RECOGRAPH_THREADS.
    """

    def __init__(self, fraction: float = 0.125, sources=topology.ALL, threads=None):
        self.fraction = fraction
        self.sources = sources
        self.threads = threads

    def fit(self, graph: RecGraph, y=None) -> "BetweennessEdgeDetector":
        """Score and rank every edge of ``graph``."""
        check_graph(graph)
        if not 0.0 < self.fraction <= 1.0:
            raise ValueError(f"fraction must lie in (0, 1], got {self.fraction}")
        self.scores_ = topology.edge_betweenness(
            graph, sources=self.sources, threads=self.threads
        )
        self.ranking_ = rank_edges(graph, self.scores_)
        self.n_edges_ = graph.n_edges
        return self

    def _check_fitted(self) -> None:
        if not hasattr(self, "ranking_"):
            raise NotFittedError(
                "this BetweennessEdgeDetector is not fitted yet; call fit first"
            )

    def decision_function(self) -> np.ndarray:
        """Edge scores aligned with the fitted graph's edge arrays."""
        self._check_fitted()
        return self.scores_

    def predict(self) -> np.ndarray:
        """Boolean mask over edges: True = flagged as biased.

        The top floor(fraction * |E|) ranked edges are flagged.
        """
        self._check_fitted()
        flagged = np.zeros(self.n_edges_, dtype=bool)
        top = int(np.floor(self.fraction * self.n_edges_))
        flagged[self.ranking_.order[:top]] = True
        return flagged

    def fit_predict(self, graph: RecGraph, y=None) -> np.ndarray:
        return self.fit(graph).predict()

    def score(self, graph: RecGraph, y=None) -> float:
        """ROC AUC of the fitted ranking against ``graph``'s labels."""
        self._check_fitted()
        if graph.n_edges != self.n_edges_:
            raise ValueError("score expects the graph the detector was fitted on")
        return metrics.roc(self.ranking_, graph).auc
