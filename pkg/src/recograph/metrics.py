"""Evaluation of edge rankings against ground-truth bias labels.

Positives are exactly the biased-labeled edges; official and unknown
edges both count as negatives. Tied scores collapse into one ROC point,
so the curve never depends on how a tie-break happened to order equal
scores.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateTruth, InvalidParams
from .graph import EdgeLabel, RecGraph


@dataclass(frozen=True)
class RocCurve:
    """Receiver operating characteristic of one edge ranking."""

    fpr: np.ndarray
    tpr: np.ndarray
    auc: float
    positives: int
    negatives: int

    def __post_init__(self):
        self.fpr.setflags(write=False)
        self.tpr.setflags(write=False)


def trapezoid_area(fpr: np.ndarray, tpr: np.ndarray) -> float:
    return float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1])) * 0.5)


def _count_auc(false_pos, true_pos, positives: int, negatives: int) -> float:
    """Trapezoid area from integer counts: exact up to one final division.

    Summing float rate increments loses ulps (a perfect ranking would come
    out at 0.999...), so the area is accumulated in exact integers first.
    """
    area2 = 0
    prev_fp = 0
    prev_tp = 0
    for fp, tp in zip(false_pos.tolist(), true_pos.tolist()):
        area2 += (fp - prev_fp) * (tp + prev_tp)
        prev_fp, prev_tp = fp, tp
    return area2 / (2 * positives * negatives)


def _positive_mask(graph: RecGraph, order: np.ndarray) -> np.ndarray:
    labels = graph.label_codes[order]
    mask = labels == EdgeLabel.BIASED.value
    positives = int(mask.sum())
    if positives == 0 or positives == len(mask):
        raise DegenerateTruth(
            f"need both biased and non-biased edges, got {positives} biased "
            f"of {len(mask)}"
        )
    return mask


def roc(ranking, graph: RecGraph) -> RocCurve:
    """Threshold sweep down the ranking, one point per distinct score."""
    order, scores = ranking.order, ranking.scores
    mask = _positive_mask(graph, order)
    positives = int(mask.sum())
    negatives = len(mask) - positives
    ranked_scores = scores[order]
    # prefix ends where the score changes; the final prefix is the whole list
    block_ends = np.flatnonzero(ranked_scores[:-1] != ranked_scores[1:])
    cut_points = np.concatenate([block_ends, [len(mask) - 1]])
    true_pos = np.cumsum(mask)[cut_points]
    false_pos = cut_points + 1 - true_pos
    fpr = np.concatenate([[0.0], false_pos / negatives])
    tpr = np.concatenate([[0.0], true_pos / positives])
    return RocCurve(
        fpr=fpr,
        tpr=tpr,
        auc=_count_auc(false_pos, true_pos, positives, negatives),
        positives=positives,
        negatives=negatives,
    )


def recall_at_fraction(ranking, graph: RecGraph, x: float) -> float:
    """Share of biased edges inside the top floor(x * |E|) of the ranking."""
    if not 0.0 < x <= 1.0:
        raise InvalidParams(f"x must lie in (0, 1], got {x}")
    mask = _positive_mask(graph, ranking.order)
    top = int(np.floor(x * len(mask)))
    return float(mask[:top].sum() / mask.sum())


def perfect_curve(positives: int, negatives: int) -> RocCurve:
    """Best-achievable reference curve: every biased edge ranked first."""
    if positives < 1 or negatives < 1:
        raise DegenerateTruth(
            f"need positive counts, got positives={positives}, "
            f"negatives={negatives}"
        )
    return RocCurve(
        fpr=np.array([0.0, 0.0, 1.0]),
        tpr=np.array([0.0, 1.0, 1.0]),
        auc=1.0,
        positives=positives,
        negatives=negatives,
    )


FPR_GRID_POINTS = 101


def average_curves(curves) -> RocCurve:
    """Pointwise mean of several ROC curves on a common fpr grid.

    Each curve is linearly interpolated onto 101 evenly spaced fpr
    values; positives/negatives are summed across inputs.
    """
    curves = list(curves)
    if not curves:
        raise InvalidParams("average_curves needs at least one curve")
    grid = np.linspace(0.0, 1.0, FPR_GRID_POINTS)
    stacked = np.vstack([np.interp(grid, c.fpr, c.tpr) for c in curves])
    mean_tpr = stacked.mean(axis=0)
    return RocCurve(
        fpr=grid,
        tpr=mean_tpr,
        auc=trapezoid_area(grid, mean_tpr),
        positives=sum(c.positives for c in curves),
        negatives=sum(c.negatives for c in curves),
    )
