"""Compiled inner loops over CSR adjacency arrays.

All kernels take ``indptr``/``indices`` int64 arrays and never allocate
per-edge Python objects. Accumulators are integers so results do not depend
on traversal order.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def bfs(indptr, indices, source, dist, queue):
    """Fill ``dist`` with hop counts from ``source`` (-1 = unreachable).

    Returns ``(reached, sum_of_distances, eccentricity, farthest_vertex)``.
    """
    dist[:] = -1
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    total = 0
    far = source
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if dist[v] < 0:
                dist[v] = du + 1
                total += du + 1
                queue[tail] = v
                tail += 1
                far = v
    return tail, total, dist[far], far


@njit(cache=True)
def sweep(indptr, indices, sources):
    """BFS from every source; per-source reached count, distance sum and eccentricity."""
    n = indptr.shape[0] - 1
    k = sources.shape[0]
    reached = np.zeros(k, dtype=np.int64)
    totals = np.zeros(k, dtype=np.int64)
    ecc = np.zeros(k, dtype=np.int64)
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for i in range(k):
        r, t, e, _ = bfs(indptr, indices, sources[i], dist, queue)
        reached[i] = r
        totals[i] = t
        ecc[i] = e
    return reached, totals, ecc


@njit(cache=True)
def triangles(indptr, indices):
    """Triangles through each vertex of a simple undirected CSR graph.

    Edges are oriented from lower to higher (degree, id) rank, so each
    triangle is found exactly once from its lowest-ranked corner.
    """
    n = indptr.shape[0] - 1
    deg = indptr[1:] - indptr[:-1]
    order = np.argsort(deg * n + np.arange(n), kind="mergesort")
    rank = np.empty(n, dtype=np.int64)
    for r in range(n):
        rank[order[r]] = r

    fwd_ptr = np.zeros(n + 1, dtype=np.int64)
    for u in range(n):
        c = 0
        for p in range(indptr[u], indptr[u + 1]):
            if rank[indices[p]] > rank[u]:
                c += 1
        fwd_ptr[u + 1] = fwd_ptr[u] + c
    fwd = np.empty(fwd_ptr[n], dtype=np.int64)
    for u in range(n):
        q = fwd_ptr[u]
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if rank[v] > rank[u]:
                fwd[q] = v
                q += 1

    tri = np.zeros(n, dtype=np.int64)
    mark = np.full(n, -1, dtype=np.int64)
    for u in range(n):
        for p in range(fwd_ptr[u], fwd_ptr[u + 1]):
            mark[fwd[p]] = u
        for p in range(fwd_ptr[u], fwd_ptr[u + 1]):
            v = fwd[p]
            for q in range(fwd_ptr[v], fwd_ptr[v + 1]):
                w = fwd[q]
                if mark[w] == u:
                    tri[u] += 1
                    tri[v] += 1
                    tri[w] += 1
    return tri
