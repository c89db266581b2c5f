"""Cascade engines and node-threshold generators.

The linear-threshold engine is deterministic; the independent-cascade
engine is deterministic per RNG seed. Threshold generators scale by
node degree so thresholds stay comparable with unit edge weights; the
class-aware generator draws each node's fraction from an interval set
by its adopter class, giving early groups systematically lower
adoption resistance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .graph import Graph

#: Per-class threshold fraction intervals (innovator first, laggard last).
#: These are configuration defaults, not calibrated constants.
DEFAULT_CLASS_INTERVALS = (
    (0.0, 0.2),
    (0.1, 0.35),
    (0.3, 0.6),
    (0.5, 0.85),
    (0.75, 1.0),
)


@dataclass
class ThresholdAssignment:
    """Per-node activation thresholds plus how they were generated."""

    theta: np.ndarray
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=np.float64)
        if not np.all(np.isfinite(self.theta)) or np.any(self.theta < 0):
            raise ValueError("thresholds must be finite and >= 0")


@dataclass
class CascadeResult:
    """Outcome of one cascade: activation round per node, -1 if never active."""

    rounds: np.ndarray
    sweeps: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rounds = np.asarray(self.rounds, dtype=np.int32)

    @property
    def activated(self) -> np.ndarray:
        return np.flatnonzero(self.rounds >= 0)

    @property
    def size(self) -> int:
        return int((self.rounds >= 0).sum())

    def write_csv(self, path, labels) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write("label,round\n")
            for v in self.activated:
                f.write(f"{labels[v]},{self.rounds[v]}\n")

    def summary(self) -> dict:
        return {
            "activated": self.size,
            "sweeps": self.sweeps,
            "params": self.params,
        }


def _seed_array(g: Graph, seeds) -> np.ndarray:
    arr = np.unique(np.asarray(list(seeds), dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= g.n):
        raise ValueError("seed node id outside 0..n-1")
    return arr


def lt_simulate(g: Graph, seeds, thresholds: ThresholdAssignment) -> CascadeResult:
    """Synchronous linear-threshold cascade with unit edge weights.

    An inactive node with at least one active neighbor activates once
    its count of active neighbors reaches its threshold; sweeps repeat
    until one activates nobody. Seeds carry round 0.
    """
    theta = thresholds.theta
    if theta.shape[0] != g.n:
        raise ValueError("threshold vector length != n")
    seed_arr = _seed_array(g, seeds)
    if seed_arr.size == 0:
        return CascadeResult(np.full(g.n, -1, np.int32), 0, {"model": "LT"})
    rounds, sweeps = _kernels.lt_cascade(g.indptr, g.indices, theta, seed_arr)
    return CascadeResult(rounds, int(sweeps), {"model": "LT", "thresholds": thresholds.kind})


def ic_simulate(g: Graph, seeds, p, seed: int = 0) -> CascadeResult:
    """Independent-cascade simulation.

    Every newly activated node gets a single chance to activate each
    neighbor that was inactive at the start of the sweep; an attempt on
    the arc (u, v) succeeds with probability ``p`` (a constant in
    [0, 1], or a callable ``p(u, v)`` for per-arc presets). Frontier
    nodes and their neighbors are processed in ascending id order, so
    the outcome is a pure function of the RNG seed.
    """
    prob_fn = p if callable(p) else None
    if prob_fn is None and not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    rng = np.random.default_rng(seed)
    rounds = np.full(g.n, -1, dtype=np.int32)
    frontier = _seed_array(g, seeds)
    rounds[frontier] = 0

    sweeps = 0
    r = 0
    while frontier.size:
        sweeps += 1
        r += 1
        newly: set[int] = set()
        for u in frontier:
            nbrs = g.neighbors(u)
            cand = nbrs[rounds[nbrs] == -1]
            if cand.size == 0:
                continue
            draws = rng.random(cand.size)
            if prob_fn is None:
                hits = cand[draws < p]
            else:
                probs = np.fromiter(
                    (prob_fn(int(u), int(v)) for v in cand), dtype=np.float64, count=cand.size
                )
                hits = cand[draws < probs]
            newly.update(int(v) for v in hits)
        if not newly:
            break
        nxt = np.array(sorted(newly), dtype=np.int64)
        rounds[nxt] = r
        frontier = nxt
    params = {"model": "IC", "seed": seed}
    if prob_fn is None:
        params["p"] = float(p)
    return CascadeResult(rounds, sweeps, params)


def thresholds_uniform_multiplier(g: Graph, c: float) -> ThresholdAssignment:
    """theta(v) = c * deg(v) for every node."""
    if not 0.0 < c <= 1.0:
        raise ValueError(f"multiplier {c} outside (0, 1]")
    theta = c * g.degrees.astype(np.float64)
    return ThresholdAssignment(theta, "uniform-multiplier", {"c": c})


def thresholds_uniform_random(g: Graph, seed: int = 0) -> ThresholdAssignment:
    """theta(v) = U(0,1) * deg(v), deterministic per seed.

    The fraction is scaled by degree so a threshold stays comparable to
    the unit-weight neighbor counts the cascade engine accumulates.
    """
    rng = np.random.default_rng(seed)
    frac = rng.random(g.n)
    theta = frac * g.degrees.astype(np.float64)
    return ThresholdAssignment(
        theta, "uniform-random", {"seed": seed, "scaling": "degree"}
    )


def thresholds_class_aware(
    g: Graph,
    classes,
    intervals=DEFAULT_CLASS_INTERVALS,
    seed: int = 0,
) -> ThresholdAssignment:
    """Per-class threshold fractions: theta(v) = U(lo_class, hi_class) * deg(v).

    ``classes`` is a per-node int label array (or an object exposing
    one as ``.labels``); ``intervals[c]`` gives the fraction interval
    of class c. Nodes without a label make this fail loudly.
    """
    labels = np.asarray(getattr(classes, "labels", classes), dtype=np.int64)
    if labels.shape[0] != g.n:
        raise ValueError("class label vector length != n")
    missing = np.flatnonzero(labels < 0)
    if missing.size:
        shown = ", ".join(str(v) for v in missing[:10])
        more = "" if missing.size <= 10 else f" (+{missing.size - 10} more)"
        raise ValueError(f"nodes without class label: {shown}{more}")
    lo = np.array([iv[0] for iv in intervals], dtype=np.float64)
    hi = np.array([iv[1] for iv in intervals], dtype=np.float64)
    if np.any(lo < 0) or np.any(hi > 1) or np.any(lo > hi):
        raise ValueError("each interval needs 0 <= lo <= hi <= 1")
    if labels.max() >= lo.shape[0]:
        raise ValueError("class label outside the interval table")
    rng = np.random.default_rng(seed)
    frac = lo[labels] + rng.random(g.n) * (hi[labels] - lo[labels])
    theta = frac * g.degrees.astype(np.float64)
    return ThresholdAssignment(
        theta,
        "class-aware",
        {"seed": seed, "intervals": [list(iv) for iv in intervals], "scaling": "degree"},
    )


def weighted_cascade_probability(g: Graph):
    """Arc probability preset: 1 / deg(source) on each arc."""
    deg = g.degrees

    def prob(u: int, v: int) -> float:
        return 1.0 / deg[u] if deg[u] else 0.0

    return prob


def trivalency_probability(seed: int = 0, choices=(0.1, 0.01, 0.001)):
    """Arc probability preset: a stable pseudo-random pick per ordered arc."""
    mask = (1 << 64) - 1

    def prob(u: int, v: int) -> float:
        h = (
            u * 0x9E3779B97F4A7C15 + v * 0xC2B2AE3D27D4EB4F + seed * 0xD6E8FEB86659FD93
        ) & mask
        h ^= h >> 29
        h = (h * 0xBF58476D1CE4E5B9) & mask
        h ^= h >> 32
        return choices[h % len(choices)]

    return prob
