"""Synthetic graph and adoption-data generators.

Used by the test battery and the CLI demo paths: uniform random
graphs, planted-block graphs whose groups mirror adopter classes, a
preferential-attachment generator for scale benchmarks, and adoption
days drawn per planted class. Everything is deterministic per seed.
"""

from __future__ import annotations

import numpy as np

from .graph import AdoptionTable, Graph


def _pairs_from_linear(n: int, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Decode linear indices of the upper-triangle pair enumeration.

    Pairs are ordered (0,1),(0,2),..,(0,n-1),(1,2),.. ; a float sqrt
    gives the row, then an exact integer fix-up removes any rounding
    error at row boundaries.
    """
    t = t.astype(np.int64)
    b = 2 * n - 1
    i = np.floor((b - np.sqrt(b * b - 8.0 * t)) / 2.0).astype(np.int64)
    offset = i * (n - 1) - i * (i - 1) // 2
    too_big = offset > t
    i[too_big] -= 1
    offset = i * (n - 1) - i * (i - 1) // 2
    too_small = t - offset >= (n - 1 - i)
    i[too_small] += 1
    offset = i * (n - 1) - i * (i - 1) // 2
    j = i + 1 + (t - offset)
    return i, j


def _sample_pairs(n_pairs: int, p: float, rng) -> np.ndarray:
    """Distinct linear pair indices, each pair present with probability p."""
    if n_pairs == 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(n_pairs, dtype=np.int64)
    m = rng.binomial(n_pairs, p)
    return rng.choice(n_pairs, size=m, replace=False).astype(np.int64)


def gnp_random_graph(n: int, p: float, seed: int = 0) -> Graph:
    """Uniform random graph: every unordered pair is an edge w.p. p."""
    rng = np.random.default_rng(seed)
    t = _sample_pairs(n * (n - 1) // 2, p, rng)
    u, v = _pairs_from_linear(n, t)
    return Graph.from_edge_arrays(n, u, v)


def stochastic_block_graph(
    block_sizes, probs, seed: int = 0
) -> tuple[Graph, np.ndarray]:
    """Planted-block random graph.

    ``probs[i][j]`` is the edge probability between blocks i and j.
    Returns the graph and the per-node block label array; nodes are
    numbered block by block.
    """
    sizes = np.asarray(block_sizes, dtype=np.int64)
    probs = np.asarray(probs, dtype=np.float64)
    k = sizes.shape[0]
    if probs.shape != (k, k):
        raise ValueError("probability matrix shape does not match block count")
    if not np.allclose(probs, probs.T):
        raise ValueError("probability matrix must be symmetric")
    n = int(sizes.sum())
    starts = np.concatenate([[0], np.cumsum(sizes)])
    rng = np.random.default_rng(seed)

    us, vs = [], []
    for i in range(k):
        t = _sample_pairs(int(sizes[i]) * (int(sizes[i]) - 1) // 2, probs[i, i], rng)
        a, b = _pairs_from_linear(int(sizes[i]), t)
        us.append(a + starts[i])
        vs.append(b + starts[i])
        for j in range(i + 1, k):
            t = _sample_pairs(int(sizes[i]) * int(sizes[j]), probs[i, j], rng)
            us.append(t // sizes[j] + starts[i])
            vs.append(t % sizes[j] + starts[j])

    labels = np.repeat(np.arange(k, dtype=np.int64), sizes)
    g = Graph.from_edge_arrays(n, np.concatenate(us), np.concatenate(vs))
    return g, labels


def preferential_attachment_graph(n: int, m_attach: int, seed: int = 0) -> Graph:
    """Growing graph where new nodes attach to m distinct degree-weighted targets.

    The first m nodes start unconnected and are the targets of node m.
    Produces (n - m) * m edges.
    """
    if m_attach < 1 or m_attach >= n:
        raise ValueError("need 1 <= m_attach < n")
    rng = np.random.default_rng(seed)
    us = np.empty((n - m_attach) * m_attach, dtype=np.int64)
    vs = np.empty_like(us)
    # endpoint pool: one entry per edge endpoint, so a uniform draw is
    # a degree-weighted node pick
    pool = np.empty(2 * us.shape[0], dtype=np.int64)
    pool_len = 0
    e = 0
    targets = list(range(m_attach))
    for new in range(m_attach, n):
        for t in targets:
            us[e] = new
            vs[e] = t
            pool[pool_len] = new
            pool[pool_len + 1] = t
            pool_len += 2
            e += 1
        picked: set[int] = set()
        while len(picked) < m_attach:
            cand = int(pool[rng.integers(pool_len)])
            if cand not in picked:
                picked.add(cand)
        targets = sorted(picked)
    return Graph.from_edge_arrays(n, us, vs)


def planted_adoption_days(labels, day_ranges, seed: int = 0) -> AdoptionTable:
    """Adoption days drawn uniformly from each planted class's day range."""
    labels = np.asarray(labels, dtype=np.int64)
    rng = np.random.default_rng(seed)
    days = np.empty(labels.shape[0], dtype=np.int64)
    for cls, (lo, hi) in enumerate(day_ranges):
        sel = labels == cls
        days[sel] = rng.integers(lo, hi + 1, size=int(sel.sum()))
    return AdoptionTable(days=days, has_day=np.ones(labels.shape[0], dtype=bool))
