"""Ground-truth evaluation battery against adoption timestamps.

Nodes are binned into the classic five adopter groups by adoption-day
percentile, and rankings are judged by how their top-k sets relate to
those groups: group interconnection matrices, endpoint-score
assortativity, top-k overlap, registration statistics, and the reach
of the early groups inside a top-k set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .centrality import ScoreVector
from .errors import DataError
from .graph import AdoptionTable, Graph

log = logging.getLogger(__name__)


class AdopterClass(IntEnum):
    INNOVATOR = 0
    EARLY_ADOPTER = 1
    EARLY_MAJORITY = 2
    LATE_MAJORITY = 3
    LAGGARD = 4


CLASS_NAMES = ("innovator", "early_adopter", "early_majority", "late_majority", "laggard")
N_CLASSES = len(CLASS_NAMES)

DEFAULT_CUTOFFS = (2.5, 16.0, 50.0, 84.0)

#: The early groups whose reach a campaign cares about.
EARLY_CLASSES = (AdopterClass.INNOVATOR, AdopterClass.EARLY_ADOPTER)
REACH_CLASSES = (
    AdopterClass.INNOVATOR,
    AdopterClass.EARLY_ADOPTER,
    AdopterClass.EARLY_MAJORITY,
)


@dataclass(eq=False)
class AdopterClassification:
    """Per-node adopter class label (-1 where the adoption day is unknown)."""

    labels: np.ndarray
    cutoffs: tuple
    excluded: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int8)

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    def class_sizes(self) -> np.ndarray:
        return np.bincount(self.labels[self.labels >= 0], minlength=N_CLASSES)


def classify_adopters(
    days: AdoptionTable, cutoffs: tuple = DEFAULT_CUTOFFS
) -> AdopterClassification:
    """Assign adopter classes by adoption-day percentile.

    Nodes with known days are sorted by (day, id); the first
    ceil(c/100 * N) of them fall at or below cutoff c. Nodes without a
    day stay unlabeled (-1) and are listed in ``excluded``.
    """
    cutoffs = tuple(float(c) for c in cutoffs)
    if len(cutoffs) != N_CLASSES - 1:
        raise ValueError(f"need {N_CLASSES - 1} cutoffs, got {len(cutoffs)}")
    if any(not 0.0 < c < 100.0 for c in cutoffs):
        raise ValueError("cutoffs must lie strictly inside (0, 100)")
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ValueError("cutoffs must be strictly ascending")

    labels = np.full(days.n, -1, dtype=np.int8)
    eligible = np.flatnonzero(days.has_day)
    n_eligible = eligible.shape[0]
    if n_eligible:
        order = eligible[np.lexsort((eligible, days.days[eligible]))]
        # epsilon guards against float creep past an exact percent boundary
        bounds = [int(np.ceil(c * n_eligible / 100.0 - 1e-9)) for c in cutoffs]
        prev = 0
        for cls, b in enumerate(bounds + [n_eligible]):
            labels[order[prev:b]] = cls
            prev = b
    return AdopterClassification(
        labels=labels, cutoffs=cutoffs, excluded=np.flatnonzero(~days.has_day)
    )


@dataclass(eq=False)
class GroupMatrix:
    """Class-to-class link shares.

    ``percent[r, c]`` is the percentage of group c's link endpoints
    whose partner belongs to group r; every non-empty column sums
    to 100. ``counts`` holds the raw endpoint counts.
    """

    percent: np.ndarray
    counts: np.ndarray
    empty_columns: list

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write("partner_class," + ",".join(CLASS_NAMES) + "\n")
            for r in range(N_CLASSES):
                row = ",".join(f"{self.percent[r, c]:.4f}" for c in range(N_CLASSES))
                f.write(f"{CLASS_NAMES[r]},{row}\n")


def interconnectedness(g: Graph, classes: AdopterClassification) -> GroupMatrix:
    """How each adopter group's connections split across the groups.

    Every edge contributes both of its directed endpoints: the endpoint
    at u lands in column class(u), row class(v). Edges touching an
    unclassified node are dropped. Columns of groups with zero
    endpoints are reported as zeros and flagged.
    """
    labels = classes.labels.astype(np.int64)
    col = labels[g.edge_rows()]
    row = labels[g.indices]
    valid = (col >= 0) & (row >= 0)
    key = row[valid] * N_CLASSES + col[valid]
    counts = np.bincount(key, minlength=N_CLASSES * N_CLASSES).reshape(N_CLASSES, N_CLASSES)

    totals = counts.sum(axis=0)
    percent = np.zeros((N_CLASSES, N_CLASSES), dtype=np.float64)
    np.divide(counts * 100.0, totals, out=percent, where=totals > 0)
    empty = [CLASS_NAMES[c] for c in range(N_CLASSES) if totals[c] == 0]
    if empty:
        log.warning("group matrix: zero link endpoints for %s", ", ".join(empty))
    return GroupMatrix(percent=percent, counts=counts, empty_columns=empty)


@dataclass(frozen=True)
class Assortativity:
    """Pearson correlation of a node score across edge endpoints."""

    value: float
    degenerate: bool = False

    def __float__(self) -> float:
        return self.value


def numeric_assortativity(g: Graph, scores) -> Assortativity:
    """Endpoint-score correlation over all 2m ordered edge endpoint pairs.

    Ranges from -1 (high-score nodes attach to low-score nodes) to +1
    (nodes attach to equals). Zero endpoint variance (every edge
    endpoint carries the same score) is reported as 0 with the
    degenerate flag set.
    """
    if g.m == 0:
        raise ValueError("assortativity needs at least one edge")
    vals = scores.values if isinstance(scores, ScoreVector) else np.asarray(scores, np.float64)
    x = vals[g.edge_rows()]
    y = vals[g.indices]
    xm = x - x.mean()
    ym = y - y.mean()
    vx = float((xm * xm).mean())
    vy = float((ym * ym).mean())
    if vx == 0.0 or vy == 0.0:
        return Assortativity(0.0, degenerate=True)
    r = float((xm * ym).mean() / np.sqrt(vx * vy))
    return Assortativity(max(-1.0, min(1.0, r)))


@dataclass(eq=False)
class TopKSet:
    """Exactly k nodes with the highest scores, boundary ties subsampled."""

    measure: str
    k: int
    members: np.ndarray
    seed: int

    def __post_init__(self):
        self.members = np.asarray(self.members, dtype=np.int64)

    @property
    def mask_size(self) -> int:
        return self.members.shape[0]


def top_k(scores: ScoreVector, k: int, seed: int = 0) -> TopKSet:
    """Top k nodes by score.

    Everything strictly above the k-th score value is in; nodes tied at
    the boundary value are discarded uniformly at random (seeded) until
    exactly k remain.
    """
    vals = scores.values
    n = vals.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k {k} outside 1..{n}")
    boundary = np.partition(vals, n - k)[n - k]
    above = np.flatnonzero(vals > boundary)
    ties = np.flatnonzero(vals == boundary)
    need = k - above.shape[0]
    rng = np.random.default_rng(seed)
    chosen = rng.choice(ties, size=need, replace=False)
    members = np.sort(np.concatenate([above, chosen]))
    return TopKSet(measure=scores.measure, k=k, members=members, seed=seed)


def overlap_matrix(sets: list) -> np.ndarray:
    """Pairwise intersection sizes of equally sized top-k sets."""
    if len(sets) < 2:
        raise ValueError("need at least two sets")
    k = sets[0].k
    if any(s.k != k for s in sets):
        raise ValueError("sets have unequal k")
    out = np.empty((len(sets), len(sets)), dtype=np.int64)
    for i, a in enumerate(sets):
        for j, b in enumerate(sets):
            out[i, j] = np.intersect1d(a.members, b.members).shape[0]
    return out


@dataclass(eq=False)
class RegistrationStats:
    """Adoption-day summary of a node set."""

    mean: float
    median: int
    counted: int
    missing: int
    class_histogram: np.ndarray | None = None


def registration_stats(
    members, days: AdoptionTable, classes: AdopterClassification | None = None
) -> RegistrationStats:
    """Mean and median adoption day of a node set.

    ``members`` is a TopKSet or an id array (pass all ids for the
    whole-graph row). The median is the lower middle element for even
    counts, so it is always an actual day value. Members without a day
    are excluded and counted; all missing is an error.
    """
    ids = members.members if isinstance(members, TopKSet) else np.asarray(members, np.int64)
    have = days.has_day[ids]
    d = np.sort(days.days[ids[have]])
    if d.size == 0:
        raise DataError("no member has a known adoption day")
    hist = None
    if classes is not None:
        lab = classes.labels[ids]
        hist = np.bincount(lab[lab >= 0], minlength=N_CLASSES)
    return RegistrationStats(
        mean=float(d.mean()),
        median=int(d[(d.size - 1) // 2]),
        counted=int(d.size),
        missing=int(ids.size - d.size),
        class_histogram=hist,
    )


@dataclass(eq=False)
class ReachReport:
    """Distinct early-group neighbors reached by a top-k set's early members."""

    counts: dict
    percent: dict
    reachers: int
    reached_total: int
    exclude: str


def reach_analysis(
    topk: TopKSet, classes: AdopterClassification, g: Graph, exclude: str = "reachers"
) -> ReachReport:
    """Neighbors the innovator/early-adopter members reach, not counting themselves.

    S is the set members classified innovator or early adopter; the
    reached set is the union of their neighborhoods minus S (or minus
    all set members with ``exclude='members'``). Reported are the
    distinct reached nodes per early group and their composition
    percentages over the three reported groups.
    """
    if exclude not in ("reachers", "members"):
        raise ValueError(f"unknown exclude mode {exclude!r}")
    labels = classes.labels
    member_lab = labels[topk.members]
    reachers = topk.members[np.isin(member_lab, [int(c) for c in EARLY_CLASSES])]
    if reachers.size:
        nbrs = np.concatenate([g.neighbors(u) for u in reachers])
        drop = reachers if exclude == "reachers" else topk.members
        reached = np.setdiff1d(np.unique(nbrs), drop, assume_unique=False)
    else:
        reached = np.empty(0, dtype=np.int64)

    counts = {}
    for cls in REACH_CLASSES:
        counts[CLASS_NAMES[cls]] = int((labels[reached] == int(cls)).sum()) if reached.size else 0
    total = sum(counts.values())
    percent = {
        name: (100.0 * c / total if total else 0.0) for name, c in counts.items()
    }
    return ReachReport(
        counts=counts,
        percent=percent,
        reachers=int(reachers.size),
        reached_total=total,
        exclude=exclude,
    )
