"""Shared fixtures, independent oracles, and acceptance reporting.

The oracles here are deliberately naive reimplementations (pure Python,
exhaustive enumeration, exact rational arithmetic) used to pin the
production algorithms' outputs. Keep them dumb: their value is being
obviously correct, not fast.

Tests marked ``@pytest.mark.criterion(n, title)`` feed the acceptance
summary: the terminal report ends with one PASS/FAIL line per criterion.
"""
from __future__ import annotations

from collections import defaultdict, deque
from fractions import Fraction

import numpy as np
import pytest

from recograph.graph import EdgeLabel, GraphBuilder

# ---- acceptance criteria reporting -------------------------------------------

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(number, title): marks a test as part of an acceptance criterion",
    )


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None and report.when in ("setup", "call"):
        number, title = marker.args
        entry = _CRITERIA.setdefault(number, {"title": title, "failed": False})
        if report.failed:
            entry["failed"] = True
        if report.when == "call" and report.skipped:
            entry["failed"] = True
    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "FAIL" if entry["failed"] else "PASS"
        terminalreporter.write_line(
            f"criterion {number}: {status} - {entry['title']}"
        )


# ---- pure-Python oracles -------------------------------------------------------


def squared_distance(a, b) -> float:
    """Coordinate-order float64 accumulation, matching the production order."""
    total = 0.0
    for x, y in zip(a, b):
        diff = float(x) - float(y)
        total += diff * diff
    return total


def knn_oracle(points, query: int, k: int) -> list[int]:
    """Exhaustive k-nearest search: sort everything, take the head.

    Ties break by ascending id, the pinned convention.
    """
    others = [i for i in range(len(points)) if i != query]
    others.sort(key=lambda i: (squared_distance(points[query], points[i]), i))
    return others[:k]


def bfs_distances_oracle(n: int, adjacency: dict, source: int) -> dict[int, int]:
    """Plain BFS hop distances from one source; only reachable nodes appear."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adjacency.get(u, ()):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def histogram_oracle(n: int, adjacency: dict, sources) -> tuple[dict, int]:
    """Distance histogram over ordered pairs, plus the unreachable count."""
    counts: dict[int, int] = defaultdict(int)
    unreachable = 0
    for s in sources:
        dist = bfs_distances_oracle(n, adjacency, s)
        for node, d in dist.items():
            if node != s:
                counts[d] += 1
        unreachable += n - len(dist)
    return dict(counts), unreachable


def betweenness_oracle(n: int, undirected_edges) -> dict[frozenset, Fraction]:
    """Edge betweenness by literally enumerating every shortest path.

    For each ordered (source, target) pair, every shortest path is walked
    through the predecessor DAG and contributes 1/(number of shortest
    paths) to each of its edges, accumulated as exact rationals. This is
    the ordered-pair convention: no normalization, both directions of
    each pair counted.
    """
    adjacency: dict[int, set] = {i: set() for i in range(n)}
    for u, v in undirected_edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    scores: dict[frozenset, Fraction] = {
        frozenset(e): Fraction(0) for e in undirected_edges
    }
    for source in range(n):
        dist = bfs_distances_oracle(n, adjacency, source)
        predecessors: dict[int, list] = defaultdict(list)
        for u in dist:
            for v in adjacency[u]:
                if v in dist and dist[v] == dist[u] + 1:
                    predecessors[v].append(u)

        memo: dict[int, list] = {source: [[source]]}

        def all_paths(node):
            if node not in memo:
                paths = []
                for pred in predecessors[node]:
                    for path in all_paths(pred):
                        paths.append(path + [node])
                memo[node] = paths
            return memo[node]

        for target in dist:
            if target == source:
                continue
            paths = all_paths(target)
            share = Fraction(1, len(paths))
            for path in paths:
                for a, b in zip(path, path[1:]):
                    scores[frozenset((a, b))] += share
    return scores


# ---- small-graph builders ------------------------------------------------------


def graph_from_edges(n: int, edges, label=EdgeLabel.OFFICIAL):
    """Directed RecGraph from (src, dst[, label]) tuples."""
    builder = GraphBuilder(n)
    for edge in edges:
        if len(edge) == 3:
            src, dst, edge_label = edge
        else:
            (src, dst), edge_label = edge, label
        builder.add_edge(src, dst, edge_label)
    return builder.freeze()


def random_connected_graph(rng: np.random.Generator, n: int):
    """Random connected undirected support, returned as directed edges.

    A random spanning tree plus extra random edges; direction of each
    edge is random so the symmetrization path gets exercised.
    """
    edges = set()
    order = rng.permutation(n)
    for i in range(1, n):
        a = int(order[rng.integers(0, i)])
        b = int(order[i])
        edges.add((min(a, b), max(a, b)))
    extra = int(rng.integers(0, 2 * n))
    for _ in range(extra):
        a, b = int(rng.integers(0, n)), int(rng.integers(0, n))
        if a != b:
            edges.add((min(a, b), max(a, b)))
    directed = []
    for a, b in sorted(edges):
        if rng.random() < 0.5:
            a, b = b, a
        label = EdgeLabel.BIASED if rng.random() < 0.2 else EdgeLabel.OFFICIAL
        directed.append((a, b, label))
    return directed


@pytest.fixture
def two_cliques_bridge():
    """Two 5-cliques joined by a single bridge edge (nodes 4 and 5)."""
    builder = GraphBuilder(10)
    for base in (0, 5):
        for i in range(base, base + 5):
            for j in range(base, base + 5):
                if i < j:
                    builder.add_edge(i, j, EdgeLabel.OFFICIAL)
    builder.add_edge(4, 5, EdgeLabel.BIASED)
    return builder.freeze()
