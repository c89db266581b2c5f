"""Measure registry: config in, named ScoreVector out."""

from __future__ import annotations

import numpy as np

from . import centrality
from .centrality import GDDParams, PageRankParams, ScoreVector
from .config import ALL_MEASURES, RunConfig, derive_seed
from .errors import ConfigError, DataError
from .graph import Graph
from .topcandidate import top_candidate_ranking


def tc_scores(g: Graph, grid) -> ScoreVector:
    """The alpha-sweep ranking as a score vector.

    The node ranked r gets score n - r + 1, so a top-k cut by score is
    exactly the first k of the ranking (no ties by construction).
    """
    ranking = top_candidate_ranking(g, grid)
    values = np.empty(g.n, dtype=np.float64)
    values[ranking.order] = np.arange(g.n, 0, -1, dtype=np.float64)
    return ScoreVector("tc", values, {"grid": list(ranking.grid), "scores": "rank-based"})


def compute_measure(g: Graph, name: str, cfg: RunConfig) -> ScoreVector:
    if name == "degree":
        return centrality.degree(g)
    if name == "harmonic":
        mode = cfg.harmonic_mode
        if mode == "auto":
            mode = "exact" if g.n <= cfg.harmonic_pivots else "sampled"
        if mode == "exact":
            return centrality.harmonic(g, mode="exact")
        pivots = cfg.harmonic_pivots
        if pivots > g.n:
            raise ConfigError(f"harmonic_pivots {pivots} > node count {g.n}", field="harmonic_pivots")
        return centrality.harmonic(
            g, mode="sampled", pivots=pivots, seed=derive_seed(cfg.seed, "harmonic-pivots")
        )
    if name == "pagerank":
        params = PageRankParams(cfg.damping, cfg.pagerank_tol, cfg.pagerank_max_iter)
        return centrality.pagerank(g, params)
    if name == "kcore":
        return centrality.k_core(g)
    if name == "ltc":
        return centrality.ltc(g, cfg.ltc_theta)
    if name == "gdd":
        if cfg.gdd_q > g.n:
            raise ConfigError(f"gdd_q {cfg.gdd_q} > node count {g.n}", field="gdd_q")
        return centrality.gdd(g, GDDParams(cfg.gdd_p, cfg.gdd_q, cfg.gdd_variant))
    if name == "shapley":
        return centrality.shapley_g1(g)
    if name == "tc":
        return tc_scores(g, cfg.tc_grid)
    raise ConfigError(
        f"unknown measure {name!r}; valid: {', '.join(ALL_MEASURES)}", field="measures"
    )


def read_scores_csv(path, g: Graph, measure: str) -> ScoreVector:
    """Load a ``label,score`` file back into graph order."""
    values = np.full(g.n, np.nan, dtype=np.float64)
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip()
        if header != "label,score":
            raise DataError(f"{path}: expected header 'label,score', got {header!r}")
        for line in f:
            line = line.strip()
            if not line:
                continue
            label, _, raw = line.rpartition(",")
            try:
                node = g.id_of(label)
            except KeyError:
                raise DataError(f"{path}: unknown node label {label!r}") from None
            values[node] = float(raw)
    if np.isnan(values).any():
        missing = int(np.isnan(values).sum())
        raise DataError(f"{path}: {missing} nodes have no score")
    return ScoreVector(measure, values, {"source": str(path)})
