"""Numba kernels for per-source BFS sweeps over CSR adjacency arrays.

Both kernels process a block of sources and return that block's partial
result. Callers split the source list into fixed-size blocks, may run
blocks on a thread pool (the kernels release the GIL), and must reduce
the partial results in block order; within a kernel every loop order is
fixed, so results do not depend on the thread count.
"""
from __future__ import annotations

import numpy as np
from numba import njit

SOURCE_BLOCK = 256


@njit(cache=True, nogil=True)
def bfs_distance_counts(indptr, indices, sources, n):
    """Histogram hop distances from each source to all reachable nodes.

    Returns (counts, unreachable): counts[d] = ordered pairs at distance
    d >= 1 with the source in ``sources``; unreachable = ordered pairs
    with no path. Integer totals, so partial results commute exactly.
    """
    counts = np.zeros(n, dtype=np.int64)
    unreachable = 0
    dist = np.empty(n, dtype=np.int32)
    queue = np.empty(n, dtype=np.int64)
    for si in range(len(sources)):
        s = sources[si]
        dist[:] = -1
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        reached = 0
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                if dist[v] < 0:
                    dist[v] = du + 1
                    counts[du + 1] += 1
                    reached += 1
                    queue[tail] = v
                    tail += 1
        unreachable += (n - 1) - reached
    return counts, unreachable


@njit(cache=True, nogil=True)
def brandes_edge_scores(indptr, indices, edge_ids, sources, n, n_undirected):
    """Shortest-path dependency of each source block on every undirected edge.

    Standard breadth-first Brandes accumulation on an unweighted graph
    whose CSR rows list both directions of each undirected edge;
    ``edge_ids[e]`` maps CSR slot ``e`` to its undirected edge index.
    Summed over all sources this yields the ordered-pair edge-betweenness
    (each unordered source/target pair counted twice, no normalization).
    """
    scores = np.zeros(n_undirected, dtype=np.float64)
    dist = np.empty(n, dtype=np.int32)
    sigma = np.empty(n, dtype=np.float64)
    delta = np.empty(n, dtype=np.float64)
    queue = np.empty(n, dtype=np.int64)
    for si in range(len(sources)):
        s = sources[si]
        dist[:] = -1
        sigma[:] = 0.0
        delta[:] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                if dist[v] < 0:
                    dist[v] = du + 1
                    queue[tail] = v
                    tail += 1
                if dist[v] == du + 1:
                    sigma[v] += sigma[u]
        for qi in range(tail - 1, 0, -1):
            w = queue[qi]
            dw = dist[w]
            coeff = (1.0 + delta[w]) / sigma[w]
            for e in range(indptr[w], indptr[w + 1]):
                v = indices[e]
                if dist[v] == dw - 1:
                    contribution = sigma[v] * coeff
                    scores[edge_ids[e]] += contribution
                    delta[v] += contribution
    return scores
