"""Shared fixtures and independent oracle helpers.

The oracle implementations here are deliberately naive (dicts, sets,
deques, dense matrices) so they share no code path with the package.
"""

from collections import deque

import numpy as np
import pytest
from hypothesis import settings

from adoptrank import Graph, load_edge_list

settings.register_profile("suite", max_examples=50, deadline=None)
settings.load_profile("suite")


def graph_from_edges(edges, n=None):
    """Graph straight from an iterable of (u, v) id pairs."""
    edges = list(edges)
    if n is None:
        n = max(max(u, v) for u, v in edges) + 1 if edges else 0
    us = [u for u, _ in edges]
    vs = [v for _, v in edges]
    return Graph.from_edge_arrays(n, us, vs)


def path_graph(n):
    return graph_from_edges([(i, i + 1) for i in range(n - 1)], n)


def star_graph(leaves, center_first=True):
    """Star with the hub at id 0 (or at the last id)."""
    if center_first:
        return graph_from_edges([(0, i) for i in range(1, leaves + 1)])
    return graph_from_edges([(leaves, i) for i in range(leaves)])


def cycle_graph(n):
    return graph_from_edges([(i, (i + 1) % n) for i in range(n)], n)


def complete_graph(n):
    return graph_from_edges([(i, j) for i in range(n) for j in range(i + 1, n)], n)


def adjacency_sets(g):
    return [set(g.neighbors(u).tolist()) for u in range(g.n)]


def bfs_oracle(adj, source, n):
    """Plain deque BFS over adjacency sets."""
    dist = [-1] * n
    dist[source] = 0
    q = deque([source])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if dist[v] == -1:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def all_pairs_harmonic_oracle(g):
    adj = adjacency_sets(g)
    n = g.n
    out = np.zeros(n)
    for u in range(n):
        dist = bfs_oracle(adj, u, n)
        out[u] = sum(1.0 / d for d in dist if d > 0)
    return out


def pagerank_solve_oracle(g, damping):
    """Direct dense linear solve of the damped walk's stationary equations."""
    n = g.n
    walk = np.zeros((n, n))
    deg = g.degrees
    for u in range(n):
        for v in g.neighbors(u):
            walk[v, u] = 1.0 / deg[u]
    for u in np.flatnonzero(deg == 0):
        walk[:, u] = 1.0 / n
    rhs = np.full(n, (1.0 - damping) / n)
    return np.linalg.solve(np.eye(n) - damping * walk, rhs)


def random_gnp_edges(n, p, rng):
    """Edge pair list for a G(n, p) sample, independent of the package generator."""
    mask = rng.random((n, n)) < p
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if mask[i, j]]
    return edges


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
