"""The comparison centrality measures.

Every function returns a :class:`ScoreVector` over all nodes. All
measures are deterministic given their parameters and seeds, and give
bit-identical results for any worker count (see ``_kernels``).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .diffusion import thresholds_uniform_multiplier
from .errors import ConvergenceError
from .graph import Graph

# pivot blocks processed at once; constant so that accumulation order,
# and therefore float output, does not depend on the worker count
_BFS_BLOCK = 128

_GDD_VARIANTS = {"degree": 0, "classic": 1, "generalized": 2}


@dataclass
class ScoreVector:
    """Named per-node scores plus the parameters that produced them."""

    measure: str
    values: np.ndarray
    params: dict = field(default_factory=dict)
    runtime_s: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def write_csv(self, path, labels) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write("label,score\n")
            for lab, x in zip(labels, self.values):
                f.write(f"{lab},{float(x)!r}\n")

    def meta_dict(self) -> dict:
        return {"measure": self.measure, "params": self.params, "n": self.n}


@dataclass(frozen=True)
class PageRankParams:
    damping: float = 0.8
    tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ValueError(f"damping {self.damping} outside (0, 1)")
        if self.tol <= 0.0:
            raise ValueError("tol must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class GDDParams:
    spread_probability: float = 0.05
    seed_count: int = 1000
    variant: str = "generalized"

    def __post_init__(self):
        if not 0.0 < self.spread_probability <= 1.0:
            raise ValueError(f"spread probability {self.spread_probability} outside (0, 1]")
        if self.seed_count < 1:
            raise ValueError("seed_count must be >= 1")
        if self.variant not in _GDD_VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")


def degree(g: Graph) -> ScoreVector:
    """Number of connections of each node."""
    t0 = time.perf_counter()
    values = g.degrees.astype(np.float64)
    return ScoreVector("degree", values, {}, time.perf_counter() - t0)


def harmonic(
    g: Graph, mode: str = "exact", pivots: int = 2000, seed: int = 0
) -> ScoreVector:
    """Sum of reciprocal hop distances to every other node.

    Unreachable pairs contribute zero. ``mode='sampled'`` estimates the
    sum from BFS off ``pivots`` uniformly chosen source nodes, scaling
    each node's pivot sum by (n-1)/k where k counts the pivots other
    than the node itself; the estimate is unbiased and deterministic
    per seed. ``mode='exact'`` runs BFS from every node.
    """
    if mode not in ("exact", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    t0 = time.perf_counter()
    n = g.n
    if mode == "sampled":
        if pivots > n:
            raise ValueError(f"pivots {pivots} > node count {n}")
        rng = np.random.default_rng(seed)
        sources = np.sort(rng.choice(n, size=pivots, replace=False)).astype(np.int64)
    else:
        sources = np.arange(n, dtype=np.int64)

    score = np.zeros(n, dtype=np.float64)
    dist = np.empty((_BFS_BLOCK, n), dtype=np.int32)
    for lo in range(0, sources.shape[0], _BFS_BLOCK):
        block = sources[lo : lo + _BFS_BLOCK]
        db = dist[: block.shape[0]]
        _kernels.bfs_block(g.indptr, g.indices, block, db)
        contrib = np.zeros_like(db, dtype=np.float64)
        np.divide(1.0, db, out=contrib, where=db > 0)
        score += contrib.sum(axis=0)

    params: dict = {"mode": mode}
    if mode == "sampled":
        k_eff = np.full(n, pivots, dtype=np.float64)
        k_eff[sources] -= 1.0
        scale = np.zeros(n, dtype=np.float64)
        np.divide(n - 1.0, k_eff, out=scale, where=k_eff > 0)
        score *= scale
        params.update({"pivots": pivots, "seed": seed})
    return ScoreVector("harmonic", score, params, time.perf_counter() - t0)


def pagerank(g: Graph, params: PageRankParams = PageRankParams()) -> ScoreVector:
    """Stationary distribution of the damped random walk on the graph.

    Power iteration on the column-stochastic walk matrix; nodes without
    edges spread their mass uniformly over all nodes. Stops when the L1
    change drops below ``params.tol`` and raises
    :class:`ConvergenceError` if ``params.max_iter`` is not enough.
    """
    if g.n < 1:
        raise ValueError("pagerank needs at least one node")
    t0 = time.perf_counter()
    n = g.n
    deg = g.degrees
    sink = deg == 0
    inv_deg = np.zeros(n, dtype=np.float64)
    np.divide(1.0, deg, out=inv_deg, where=deg > 0)

    a = params.damping
    rank = np.full(n, 1.0 / n, dtype=np.float64)
    new = np.empty_like(rank)
    residual = np.inf
    for _ in range(params.max_iter):
        contrib = rank * inv_deg
        sink_mass = float(rank[sink].sum())
        base = a * sink_mass / n + (1.0 - a) / n
        _kernels.pagerank_step(g.indptr, g.indices, contrib, a, base, new)
        residual = float(np.abs(new - rank).sum())
        rank, new = new, rank
        if residual < params.tol:
            break
    else:
        raise ConvergenceError(
            f"pagerank did not converge in {params.max_iter} iterations "
            f"(L1 residual {residual:.3e})",
            residual=residual,
        )
    return ScoreVector(
        "pagerank",
        rank,
        {"damping": a, "tol": params.tol, "max_iter": params.max_iter},
        time.perf_counter() - t0,
    )


def k_core(g: Graph) -> ScoreVector:
    """Shell index from the minimum-degree peeling decomposition."""
    t0 = time.perf_counter()
    core = np.empty(g.n, dtype=np.int64)
    if g.n:
        _kernels.core_numbers(g.indptr, g.indices, core)
    return ScoreVector("kcore", core.astype(np.float64), {}, time.perf_counter() - t0)


def shapley_g1(g: Graph) -> ScoreVector:
    """Closed-form Shapley value of the coverage game v(C) = |C and its neighbors|.

    score(u) = sum of 1/(1+deg(v)) over v in N(u) and u itself; the
    scores sum to n exactly (up to float error).
    """
    t0 = time.perf_counter()
    w = 1.0 / (1.0 + g.degrees.astype(np.float64))
    out = np.empty(g.n, dtype=np.float64)
    if g.n:
        _kernels.neighbor_sum(g.indptr, g.indices, w, out)
    values = w + out
    return ScoreVector("shapley", values, {}, time.perf_counter() - t0)


def gdd_rank(g: Graph, params: GDDParams = GDDParams()) -> np.ndarray:
    """Greedy discounted-degree seed selection order (best seed first).

    Picks the highest-score node, discounts the scores of everything
    within two hops, and repeats ``seed_count`` times. Ties go to the
    smallest node id. The scoring variants live in one kernel so the
    discount formula can be swapped without touching the greedy loop.
    """
    if params.seed_count > g.n:
        raise ValueError(f"seed_count {params.seed_count} > node count {g.n}")
    order = np.empty(params.seed_count, dtype=np.int64)
    _kernels.gdd_select(
        g.indptr,
        g.indices,
        params.seed_count,
        params.spread_probability,
        _GDD_VARIANTS[params.variant],
        order,
    )
    return order


def gdd(g: Graph, params: GDDParams = GDDParams()) -> ScoreVector:
    """Selection order of :func:`gdd_rank` as a score vector.

    The i-th selected node gets score q-i+1 and unselected nodes get 0,
    so a top-q cut by score reproduces the selection order exactly.
    """
    t0 = time.perf_counter()
    order = gdd_rank(g, params)
    q = params.seed_count
    values = np.zeros(g.n, dtype=np.float64)
    values[order] = np.arange(q, 0, -1, dtype=np.float64)
    return ScoreVector(
        "gdd",
        values,
        {
            "spread_probability": params.spread_probability,
            "seed_count": q,
            "variant": params.variant,
            "scores": "rank-based",
        },
        time.perf_counter() - t0,
    )


def ltc(g: Graph, theta_multiplier: float = 0.7) -> ScoreVector:
    """Fraction of the graph a node activates together with its neighbors.

    For each node u, a linear-threshold cascade is seeded with u and
    N(u) under unit edge weights and thresholds theta(v) =
    multiplier * deg(v); the score is activated nodes / n. The seed set
    always counts as activated.
    """
    if not 0.0 < theta_multiplier <= 1.0:
        raise ValueError(f"theta multiplier {theta_multiplier} outside (0, 1]")
    t0 = time.perf_counter()
    theta = thresholds_uniform_multiplier(g, theta_multiplier).theta
    counts = np.empty(g.n, dtype=np.int64)
    if g.n:
        _kernels.lt_activation_counts(g.indptr, g.indices, theta, counts)
    values = counts / float(g.n) if g.n else counts.astype(np.float64)
    return ScoreVector(
        "ltc", values, {"theta_multiplier": theta_multiplier}, time.perf_counter() - t0
    )
