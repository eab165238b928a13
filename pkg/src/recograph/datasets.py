"""Synthetic biased recommendation graphs.

The model gives every item two uniform feature vectors: an *official* one
that drives the platform's visible recommender and a *hidden* one that
drives a covert recommender. Each item links to its ``k_official``
nearest neighbors in official-feature space and then to its nearest
hidden-feature neighbors that were not already linked, until it has
``k_biased`` extra edges. The ``overlap`` parameter copies that many
leading hidden coordinates from the official vector, interpolating between
fully independent (0) and identical (min of the two dimensions) recommenders.

Determinism contract: features are drawn from ``numpy.random.default_rng``
seeded with ``params.seed``, in a fixed order: first the official matrix
(row-major), then the hidden matrix, then the overlap columns are copied.
Identical params give bit-identical graphs.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from . import io
from .exceptions import InvalidParams
from .graph import EdgeLabel, GraphBuilder, RecGraph
from .validation import check_positive_int, check_seed

KNN_CHUNK_ROWS = 128


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the dual-recommender synthetic model."""

    n: int
    k_official: int
    k_biased: int
    dim_official: int
    dim_hidden: int
    overlap: int
    seed: int

    def __post_init__(self):
        check_positive_int(self.n, "n")
        check_positive_int(self.k_official, "k_official")
        check_positive_int(self.k_biased, "k_biased", minimum=0)
        check_positive_int(self.dim_official, "dim_official")
        check_positive_int(self.dim_hidden, "dim_hidden")
        check_positive_int(self.overlap, "overlap", minimum=0)
        check_seed(self.seed)
        if self.n <= self.k_official + self.k_biased:
            raise InvalidParams(
                f"n={self.n} leaves too few candidates for out-degree "
                f"{self.k_official + self.k_biased}"
            )
        max_overlap = min(self.dim_official, self.dim_hidden)
        if self.overlap > max_overlap:
            raise InvalidParams(
                f"overlap={self.overlap} exceeds min(dim_official, dim_hidden)"
                f"={max_overlap}"
            )

    @property
    def out_degree(self) -> int:
        return self.k_official + self.k_biased

    def to_mapping(self) -> dict[str, str]:
        return {key: str(value) for key, value in asdict(self).items()}

    @classmethod
    def from_mapping(cls, mapping) -> "ModelParams":
        try:
            fields = {key: int(mapping[key]) for key in (
                "n",
                "k_official",
                "k_biased",
                "dim_official",
                "dim_hidden",
                "overlap",
                "seed",
            )}
        except KeyError as missing:
            raise InvalidParams(f"config missing key {missing}") from None
        except ValueError:
            raise InvalidParams("config values must be integers") from None
        return cls(**fields)

    def to_file(self, path) -> None:
        io.write_keyvalues(self.to_mapping(), path)

    @classmethod
    def from_file(cls, path) -> "ModelParams":
        return cls.from_mapping(io.read_keyvalues(path))


class FeatureTable(NamedTuple):
    """Per-item feature vectors; rows align with item ids."""

    official: np.ndarray
    hidden: np.ndarray


def generate_features(params: ModelParams) -> FeatureTable:
    """Draw the per-item feature vectors for ``params``.

    Coordinates are uniform on [0, 1); hidden columns below
    ``params.overlap`` are exact copies of the official ones.
    """
    rng = np.random.default_rng(params.seed)
    official = rng.random((params.n, params.dim_official))
    hidden = rng.random((params.n, params.dim_hidden))
    if params.overlap:
        hidden[:, : params.overlap] = official[:, : params.overlap]
    official.setflags(write=False)
    hidden.setflags(write=False)
    return FeatureTable(official, hidden)


def _squared_distances(queries: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Pairwise squared L2 distances, accumulated coordinate by coordinate.

    The coordinate-order summation makes each entry bit-identical to a
    scalar loop over dimensions, which is what the test oracles compute.
    """
    out = np.zeros((len(queries), len(points)))
    for c in range(queries.shape[1]):
        diff = queries[:, c : c + 1] - points[None, :, c]
        out += diff * diff
    return out


def _knn_table(features: np.ndarray, k: int) -> np.ndarray:
    """Row i holds the ids of i's k nearest neighbors, nearest first.

    Ties in distance break toward the smaller id (stable sort over an
    id-ordered axis); an item is never its own neighbor.
    """
    n = len(features)
    result = np.empty((n, k), dtype=np.int64)
    for start in range(0, n, KNN_CHUNK_ROWS):
        stop = min(start + KNN_CHUNK_ROWS, n)
        dist = _squared_distances(features[start:stop], features)
        dist[np.arange(stop - start), np.arange(start, stop)] = np.inf
        order = np.argsort(dist, axis=1, kind="stable")
        result[start:stop] = order[:, :k]
    return result


def knn_neighbors(features: np.ndarray, query: int, k: int) -> np.ndarray:
    """The ``k`` items nearest to ``query`` in feature space, nearest first.

    Euclidean distance; ties break by ascending item id; the query itself
    is excluded.
    """
    features = np.asarray(features, dtype=np.float64)
    n = len(features)
    if not 0 <= query < n:
        raise InvalidParams(f"query {query} out of range for {n} items")
    if not 0 <= k < n:
        raise InvalidParams(f"k must satisfy 0 <= k < n, got k={k}, n={n}")
    dist = _squared_distances(features[query : query + 1], features)[0]
    dist[query] = np.inf
    return np.argsort(dist, kind="stable")[:k]


def build_biased_graph(params: ModelParams, features: FeatureTable | None = None) -> RecGraph:
    """Generate the labeled synthetic graph for ``params``.

    Every node gets exactly ``k_official`` official edges (nearest
    official-feature neighbors) and ``k_biased`` biased edges (nearest
    hidden-feature neighbors not already linked officially). The model
    params land in the graph metadata, so the features backing any graph
    can be regenerated exactly with :func:`generate_features`.
    """
    if features is None:
        features = generate_features(params)
    official_nb = _knn_table(features.official, params.k_official)
    hidden_nb = (
        _knn_table(features.hidden, params.out_degree)
        if params.k_biased
        else None
    )
    metadata = {f"model_{key}": value for key, value in params.to_mapping().items()}
    builder = GraphBuilder(params.n, metadata=metadata)
    for i in range(params.n):
        taken = set()
        for j in official_nb[i]:
            builder.add_edge(i, int(j), EdgeLabel.OFFICIAL)
            taken.add(int(j))
        if hidden_nb is None:
            continue
        picked = 0
        for j in hidden_nb[i]:
            if picked == params.k_biased:
                break
            if int(j) in taken:
                continue
            builder.add_edge(i, int(j), EdgeLabel.BIASED)
            picked += 1
    return builder.freeze()


def make_biased_graph(
    n: int = 200,
    k_official: int = 17,
    k_biased: int = 2,
    dim_official: int = 5,
    dim_hidden: int = 5,
    overlap: int = 0,
    seed: int = 0,
) -> tuple[RecGraph, FeatureTable]:
    """Convenience constructor returning the graph and its feature table."""
    params = ModelParams(
        n=n,
        k_official=k_official,
        k_biased=k_biased,
        dim_official=dim_official,
        dim_hidden=dim_hidden,
        overlap=overlap,
        seed=seed,
    )
    features = generate_features(params)
    return build_biased_graph(params, features), features
