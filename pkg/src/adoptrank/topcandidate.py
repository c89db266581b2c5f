"""Top Candidate expert selection and the ranking built from it.

Each node endorses a slice of its most popular neighbors (popularity =
degree). Starting from everyone, endorsements by nodes that nobody
endorses are discarded round by round; the surviving set is the
largest one that is *stable*: every member is endorsed by a member and
every endorsee of a member is in the set. Sweeping the selectivity
parameter alpha from permissive to strict and recording when each node
first appears yields a full ranking.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .graph import Graph

DEFAULT_ALPHA_GRID = tuple(round(0.1 * i, 1) for i in range(11))

#: Score assigned to nodes that never enter the expert set.
NEVER = np.inf


def _check_alpha(alpha: float) -> None:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha {alpha} outside [0, 1]")


@dataclass
class NominationRelation:
    """Who endorses whom: a CSR relation with nominees(u) a subset of N(u)."""

    indptr: np.ndarray
    indices: np.ndarray
    alpha: float
    tie_rule: str = "inclusive"

    def nominees(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u] : self.indptr[u + 1]]

    @property
    def n(self) -> int:
        return self.indptr.shape[0] - 1

    def entry_rows(self) -> np.ndarray:
        return np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))


@dataclass(eq=False)
class ExpertSet:
    """A stable set of experts for one alpha."""

    members: np.ndarray
    alpha: float
    iterations: int
    mask: np.ndarray = field(repr=False, default=None)

    def __len__(self) -> int:
        return self.members.shape[0]

    def __contains__(self, node: int) -> bool:
        return bool(self.mask[node])


@dataclass
class TopCandidateRanking:
    """Per-node entry alpha over a grid sweep, with the induced order.

    ``scores[v]`` is the smallest grid alpha whose expert set contains
    v (inf if none does). ``order`` sorts ascending by score, breaking
    ties by descending degree and then ascending id. ``membership``
    keeps the full per-alpha set sequence for audit, since the sets
    are not assumed nested across the grid.
    """

    scores: np.ndarray
    order: np.ndarray
    grid: tuple
    membership: np.ndarray

    def write_csv(self, path, labels) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write("label,score_alpha,rank\n")
            for rank, v in enumerate(self.order, 1):
                f.write(f"{labels[v]},{float(self.scores[v])!r},{rank}\n")

    def write_membership_csv(self, path, labels) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write("label," + ",".join(f"alpha_{a}" for a in self.grid) + "\n")
            for v in range(self.scores.shape[0]):
                flags = ",".join(str(int(x)) for x in self.membership[:, v])
                f.write(f"{labels[v]},{flags}\n")


def build_nominations(g: Graph, alpha: float, tie_rule: str = "inclusive") -> NominationRelation:
    """Endorsement lists for one alpha.

    Node u endorses its ``max(1, ceil(alpha * deg(u)))`` highest-degree
    neighbors. The default inclusive cut also endorses every neighbor
    tied in degree with the last one in (id-free); ``tie_rule=
    'exclusive'`` keeps exactly the target count, breaking degree ties
    by ascending node id. Isolated nodes endorse nobody.
    """
    _check_alpha(alpha)
    if tie_rule not in ("inclusive", "exclusive"):
        raise ValueError(f"unknown tie rule {tie_rule!r}")
    n = g.n
    degrees = g.degrees.astype(np.int64)
    cut_deg = np.empty(n, dtype=np.int64)
    counts = np.empty(n, dtype=np.int64)
    if n:
        _kernels.nomination_cutoffs(
            g.indptr, g.indices, degrees, float(alpha), tie_rule == "inclusive", cut_deg, counts
        )
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    indices = np.empty(indptr[-1], dtype=np.int32)
    if n:
        _kernels.nomination_fill(g.indptr, g.indices, degrees, cut_deg, indptr, indices)
    return NominationRelation(indptr, indices, float(alpha), tie_rule)


def _image(nom: NominationRelation, member: np.ndarray, entry_rows: np.ndarray) -> np.ndarray:
    """Set of all nominees of the current members."""
    targets = nom.indices[member[entry_rows]]
    out = np.zeros_like(member)
    out[targets] = True
    return out


def _verify_stability(nom: NominationRelation, member: np.ndarray, entry_rows: np.ndarray) -> None:
    image = _image(nom, member, entry_rows)
    if not np.array_equal(image, member):
        raise RuntimeError("expert set failed its stability check")


def stable_expert_set(g: Graph, alpha: float, tie_rule: str = "inclusive") -> ExpertSet:
    """Largest stable expert set for one alpha.

    Starts from all nodes and repeatedly keeps only the nominees of the
    current set; the shrinking sequence reaches its fixed point in at
    most n steps. Stability of the output is verified on every call.
    """
    _check_alpha(alpha)
    nom = build_nominations(g, alpha, tie_rule)
    entry_rows = nom.entry_rows()
    member = np.ones(g.n, dtype=bool)
    iterations = 0
    while True:
        image = _image(nom, member, entry_rows)
        iterations += 1
        if np.any(image & ~member):
            raise RuntimeError("expert set iteration grew, which cannot happen")
        if np.array_equal(image, member):
            break
        member = image
        if iterations > g.n + 1:
            raise RuntimeError("expert set iteration failed to converge")
    _verify_stability(nom, member, entry_rows)
    return ExpertSet(
        members=np.flatnonzero(member),
        alpha=float(alpha),
        iterations=iterations,
        mask=member,
    )


def top_candidate_ranking(g: Graph, grid=DEFAULT_ALPHA_GRID) -> TopCandidateRanking:
    """Alpha-sweep ranking: score = first grid alpha that admits the node.

    The grid must be strictly ascending inside [0, 1]. Nodes never
    admitted score inf and sort last (by degree, then id).
    """
    grid = tuple(float(a) for a in grid)
    if not grid:
        raise ValueError("alpha grid is empty")
    if any(not 0.0 <= a <= 1.0 for a in grid):
        raise ValueError("alpha grid values must lie in [0, 1]")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("alpha grid must be strictly ascending")

    n = g.n
    scores = np.full(n, NEVER, dtype=np.float64)
    membership = np.zeros((len(grid), n), dtype=bool)
    for i, alpha in enumerate(grid):
        es = stable_expert_set(g, alpha)
        membership[i] = es.mask
        fresh = es.mask & np.isinf(scores)
        scores[fresh] = alpha
    order = np.lexsort((np.arange(n), -g.degrees, scores))
    return TopCandidateRanking(scores=scores, order=order, grid=grid, membership=membership)
