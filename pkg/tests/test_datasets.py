"""Synthetic model: feature generation, exact kNN, biased-graph assembly."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from recograph import (
    EdgeLabel,
    InvalidParams,
    ModelParams,
    build_biased_graph,
    generate_features,
    knn_neighbors,
    make_biased_graph,
)
from recograph.datasets import _knn_table

from conftest import knn_oracle


def params(**overrides):
    base = dict(
        n=30,
        k_official=4,
        k_biased=2,
        dim_official=3,
        dim_hidden=3,
        overlap=0,
        seed=11,
    )
    base.update(overrides)
    return ModelParams(**base)


# ---- ModelParams validation ----------------------------------------------------


def test_params_require_enough_candidates():
    with pytest.raises(InvalidParams):
        params(n=6, k_official=4, k_biased=2)
    params(n=7, k_official=4, k_biased=2)


def test_params_overlap_bounded_by_dimensions():
    with pytest.raises(InvalidParams):
        params(overlap=4, dim_official=3, dim_hidden=5)
    params(overlap=3, dim_official=3, dim_hidden=5)


def test_params_reject_bad_counts():
    with pytest.raises(InvalidParams):
        params(k_official=0)
    with pytest.raises(InvalidParams):
        params(k_biased=-1)
    with pytest.raises(InvalidParams):
        params(dim_official=0)
    with pytest.raises(InvalidParams):
        params(overlap=-1)
    with pytest.raises(InvalidParams):
        params(seed=-1)


def test_params_config_round_trip(tmp_path):
    original = params(seed=987654321)
    path = tmp_path / "params.cfg"
    original.to_file(path)
    assert ModelParams.from_file(path) == original


def test_params_config_missing_key(tmp_path):
    path = tmp_path / "params.cfg"
    path.write_text("n=10\n", encoding="utf-8")
    with pytest.raises(InvalidParams):
        ModelParams.from_file(path)


# ---- feature generation ---------------------------------------------------------


def test_features_shapes_and_range():
    p = params(n=50, dim_official=4, dim_hidden=2, overlap=0)
    features = generate_features(p)
    assert features.official.shape == (50, 4)
    assert features.hidden.shape == (50, 2)
    for table in features:
        assert table.min() >= 0.0
        assert table.max() < 1.0


def test_features_deterministic():
    first = generate_features(params())
    second = generate_features(params())
    assert np.array_equal(first.official, second.official)
    assert np.array_equal(first.hidden, second.hidden)


def test_overlap_copies_leading_coordinates():
    p = params(n=3, dim_official=2, dim_hidden=2, overlap=1, k_official=1, k_biased=0)
    features = generate_features(p)
    assert np.array_equal(features.hidden[:, 0], features.official[:, 0])
    assert not np.array_equal(features.hidden[:, 1], features.official[:, 1])


def test_full_overlap_makes_hidden_equal_official():
    p = params(dim_official=3, dim_hidden=3, overlap=3)
    features = generate_features(p)
    assert np.array_equal(features.hidden, features.official)


def test_zero_overlap_draws_independent_tables():
    features = generate_features(params(overlap=0))
    assert not np.array_equal(features.hidden, features.official)


# ---- exact kNN -------------------------------------------------------------------


def test_knn_on_a_line():
    points = np.array([[0.0], [0.1], [0.5], [0.9]])
    assert list(knn_neighbors(points, 0, 2)) == [1, 2]


def test_knn_exhaustive_k():
    rng = np.random.default_rng(3)
    points = rng.random((9, 2))
    result = knn_neighbors(points, 4, 8)
    assert sorted(result) == [0, 1, 2, 3, 5, 6, 7, 8]
    assert list(result) == knn_oracle(points, 4, 8)


def test_knn_k_must_be_below_n():
    points = np.zeros((4, 1))
    with pytest.raises(InvalidParams):
        knn_neighbors(points, 0, 4)
    with pytest.raises(InvalidParams):
        knn_neighbors(points, 4, 2)


def test_knn_ties_break_by_ascending_id():
    # all points identical: every distance ties at 0
    points = np.full((6, 2), 0.25)
    assert list(knn_neighbors(points, 3, 5)) == [0, 1, 2, 4, 5]
    # symmetric pair equidistant from the query
    line = np.array([[0.0], [1.0], [-1.0], [5.0]])
    assert list(knn_neighbors(line, 0, 2)) == [1, 2]


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(2, 24),
    d=st.integers(1, 5),
    quantize=st.booleans(),
    seed=st.integers(0, 10**6),
)
def test_knn_matches_oracle(n, d, quantize, seed):
    rng = np.random.default_rng(seed)
    points = rng.random((n, d))
    if quantize:
        # coarse grid forces plenty of exact distance ties
        points = np.round(points * 2) / 2
    query = int(rng.integers(0, n))
    k = int(rng.integers(0, n))
    assert list(knn_neighbors(points, query, k)) == knn_oracle(points, query, k)


def test_knn_table_matches_single_queries():
    rng = np.random.default_rng(8)
    points = rng.random((40, 3))
    table = _knn_table(points, 5)
    for query in range(40):
        assert list(table[query]) == list(knn_neighbors(points, query, 5))


# ---- graph assembly --------------------------------------------------------------


def test_out_degree_contract():
    p = params(n=40, k_official=5, k_biased=3)
    graph = build_biased_graph(p)
    assert graph.n_edges == 40 * 8
    assert (graph.out_degrees() == 8).all()
    official = graph.label_codes == EdgeLabel.OFFICIAL.value
    biased = graph.label_codes == EdgeLabel.BIASED.value
    assert np.bincount(graph.src[official], minlength=40).tolist() == [5] * 40
    assert np.bincount(graph.src[biased], minlength=40).tolist() == [3] * 40
    assert graph.label_count(EdgeLabel.BIASED) / graph.n_edges == 3 / 8


def test_no_biased_edges_when_k_biased_zero():
    graph = build_biased_graph(params(k_biased=0))
    assert graph.label_count(EdgeLabel.BIASED) == 0
    stripped = graph.remove_labeled(EdgeLabel.BIASED)
    assert np.array_equal(stripped.src, graph.src)
    assert np.array_equal(stripped.dst, graph.dst)


def test_build_deterministic():
    first = build_biased_graph(params())
    second = build_biased_graph(params())
    assert np.array_equal(first.src, second.src)
    assert np.array_equal(first.dst, second.dst)
    assert np.array_equal(first.label_codes, second.label_codes)


def test_metadata_reproduces_features():
    graph = build_biased_graph(params())
    recovered = ModelParams.from_mapping(
        {
            key[len("model_") :]: value
            for key, value in graph.metadata.items()
            if key.startswith("model_")
        }
    )
    assert recovered == params()


def test_official_edges_are_nearest_official_neighbors():
    p = params(n=25, k_official=4, k_biased=2, overlap=0)
    features = generate_features(p)
    graph = build_biased_graph(p, features)
    for node in range(25):
        expected = set(knn_oracle(features.official, node, 4))
        lo, hi = graph.out_indptr[node], graph.out_indptr[node + 1]
        got = {
            int(graph.dst[i])
            for i in range(lo, hi)
            if graph.label_codes[i] == EdgeLabel.OFFICIAL.value
        }
        assert got == expected


def test_biased_edges_skip_official_duplicates():
    p = params(n=25, k_official=4, k_biased=2, overlap=0)
    features = generate_features(p)
    graph = build_biased_graph(p, features)
    for node in range(25):
        lo, hi = graph.out_indptr[node], graph.out_indptr[node + 1]
        official = set()
        biased = []
        for i in range(lo, hi):
            if graph.label_codes[i] == EdgeLabel.OFFICIAL.value:
                official.add(int(graph.dst[i]))
            else:
                biased.append(int(graph.dst[i]))
        ranked = knn_oracle(features.hidden, node, 24)
        expected = [j for j in ranked if j not in official][:2]
        assert sorted(biased) == sorted(expected)


def test_full_overlap_biased_edges_are_next_ranks():
    """With identical feature tables, biased picks are ranks k_R..k_R+k_B-1."""
    p = params(n=20, k_official=4, k_biased=2, dim_official=3, dim_hidden=3, overlap=3)
    features = generate_features(p)
    graph = build_biased_graph(p, features)
    for node in range(20):
        ranked = knn_oracle(features.official, node, 6)
        lo, hi = graph.out_indptr[node], graph.out_indptr[node + 1]
        biased = {
            int(graph.dst[i])
            for i in range(lo, hi)
            if graph.label_codes[i] == EdgeLabel.BIASED.value
        }
        assert biased == set(ranked[4:6])
        # and every destination sits inside the top k_R + k_B ranks
        destinations = {int(graph.dst[i]) for i in range(lo, hi)}
        assert destinations == set(ranked)


def test_make_biased_graph_returns_graph_and_features():
    graph, features = make_biased_graph(n=15, k_official=3, k_biased=1, seed=2)
    assert graph.n_nodes == 15
    assert features.official.shape == (15, 5)
    rebuilt = build_biased_graph(
        ModelParams(
            n=15,
            k_official=3,
            k_biased=1,
            dim_official=5,
            dim_hidden=5,
            overlap=0,
            seed=2,
        )
    )
    assert np.array_equal(rebuilt.dst, graph.dst)


@settings(max_examples=25, deadline=None)
@given(
    n=st.integers(8, 40),
    k_official=st.integers(1, 5),
    k_biased=st.integers(0, 2),
    overlap=st.integers(0, 2),
    seed=st.integers(0, 10**6),
)
def test_degree_invariants_property(n, k_official, k_biased, overlap, seed):
    if n <= k_official + k_biased:
        n = k_official + k_biased + 1
    p = ModelParams(
        n=n,
        k_official=k_official,
        k_biased=k_biased,
        dim_official=2,
        dim_hidden=2,
        overlap=overlap,
        seed=seed,
    )
    graph = build_biased_graph(p)
    assert (graph.out_degrees() == k_official + k_biased).all()
    assert graph.label_count(EdgeLabel.OFFICIAL) == n * k_official
    assert graph.label_count(EdgeLabel.BIASED) == n * k_biased
