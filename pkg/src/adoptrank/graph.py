"""Graph loading, canonical storage, and traversal primitives.

The graph is an immutable undirected simple graph held in compressed
adjacency form: ``indptr`` offsets into a flat, per-node-sorted
``indices`` array. External node labels are kept as strings and mapped
to dense ids 0..n-1 in first-seen order, so loading the same input
twice yields an identical object.
"""

from __future__ import annotations

import datetime as dt
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import DataError, ParseError

log = logging.getLogger(__name__)

UNREACHABLE = -1  # sentinel in distance arrays


@dataclass(frozen=True)
class EdgeListFormat:
    """How to read a plain-text edge list.

    ``delimiter=None`` splits on any whitespace run, which covers both
    tab- and space-separated files. Directed inputs are symmetrized on
    load, so the flag only documents the input's semantics.
    """

    delimiter: str | None = None
    directed: bool = False
    comment: str = "#"
    header: bool = False

    def __post_init__(self):
        if self.delimiter is not None and len(self.delimiter) != 1:
            raise ValueError("delimiter must be a single character")


class Graph:
    """Immutable undirected simple graph over dense node ids."""

    __slots__ = ("indptr", "indices", "labels", "_label_to_id", "_edge_rows")

    def __init__(self, indptr: np.ndarray, indices: np.ndarray, labels: list[str]):
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int32)
        self.labels = list(labels)
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        self._label_to_id: dict[str, int] | None = None
        self._edge_rows: np.ndarray | None = None

    @classmethod
    def from_edge_arrays(cls, n: int, u, v, labels: list[str] | None = None) -> "Graph":
        """Build a canonical graph from (possibly messy) arc arrays.

        Self-loops are dropped, arcs are symmetrized, and duplicates are
        merged. Nodes are 0..n-1 even if some have no edges.
        """
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if n > 0 and u.size:
            if u.min() < 0 or v.min() < 0 or u.max() >= n or v.max() >= n:
                raise ValueError("edge endpoint outside 0..n-1")
        keep = u != v
        uu = np.concatenate([u[keep], v[keep]])
        vv = np.concatenate([v[keep], u[keep]])
        if uu.size:
            key = np.unique(uu * np.int64(n) + vv)
            uu = key // n
            vv = (key % n).astype(np.int32)
        else:
            vv = vv.astype(np.int32)
        counts = np.bincount(uu, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        if labels is None:
            labels = [str(i) for i in range(n)]
        return cls(indptr, vv, labels)

    @property
    def n(self) -> int:
        return self.indptr.shape[0] - 1

    @property
    def m(self) -> int:
        return self.indices.shape[0] // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u] : self.indptr[u + 1]]

    def edge_rows(self) -> np.ndarray:
        """Row id of every directed adjacency entry (cached)."""
        if self._edge_rows is None:
            rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
            rows.setflags(write=False)
            self._edge_rows = rows
        return self._edge_rows

    def id_of(self, label: str) -> int:
        if self._label_to_id is None:
            self._label_to_id = {lab: i for i, lab in enumerate(self.labels)}
        return self._label_to_id[label]

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and self.labels == other.labels
        )

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def validate(self) -> None:
        """Full-scan structural check; raises ValueError on any violation."""
        n = self.n
        if self.indptr[0] != 0 or self.indptr[-1] != self.indices.shape[0]:
            raise ValueError("indptr does not span the index array")
        if np.any(np.diff(self.indptr) < 0):
            raise ValueError("indptr not monotone")
        if len(self.labels) != n:
            raise ValueError("label count != n")
        if self.indices.size:
            if self.indices.min() < 0 or self.indices.max() >= n:
                raise ValueError("neighbor id out of range")
        rows = self.edge_rows()
        if np.any(rows == self.indices):
            raise ValueError("self-loop present")
        # strictly ascending within each row: no duplicates, sorted
        same_row = rows[1:] == rows[:-1]
        if np.any(same_row & (np.diff(self.indices.astype(np.int64)) <= 0)):
            raise ValueError("neighbor lists not strictly sorted")
        fwd = np.sort(rows * np.int64(n) + self.indices)
        rev = np.sort(self.indices * np.int64(n) + rows)
        if not np.array_equal(fwd, rev):
            raise ValueError("adjacency not symmetric")
        if int(self.degrees.sum()) != 2 * self.m:
            raise ValueError("degree sum != 2m")

    def write_label_map(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write("dense_id,label\n")
            for i, lab in enumerate(self.labels):
                f.write(f"{i},{lab}\n")

    def to_npz(self, path) -> None:
        np.savez(
            path,
            indptr=self.indptr,
            indices=self.indices,
            labels=np.array(self.labels, dtype=np.str_),
        )

    @classmethod
    def from_npz(cls, path) -> "Graph":
        with np.load(path, allow_pickle=False) as z:
            return cls(z["indptr"], z["indices"], [str(x) for x in z["labels"]])


def _iter_lines(source):
    """Yield (line_no, text) from a path, byte/text stream, or line iterable."""
    if isinstance(source, (str, Path)):
        with open(source, "rb") as f:
            for i, raw in enumerate(f, 1):
                yield i, raw.decode("utf-8", errors="replace")
        return
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    for i, raw in enumerate(source, 1):
        if isinstance(raw, (bytes, bytearray)):
            raw = raw.decode("utf-8", errors="replace")
        yield i, raw


def load_edge_list(source, fmt: EdgeListFormat = EdgeListFormat()) -> Graph:
    """Parse an edge list into a canonical :class:`Graph`.

    Each non-comment line holds ``src<delim>dst``. Labels are arbitrary
    tokens and receive dense ids in first-seen order. Self-loops are
    dropped, duplicate and reciprocal arcs merge into one undirected
    edge.

    Raises :class:`ParseError` on a line with the wrong field count and
    :class:`DataError` when the input contains no edges at all.
    """
    label_to_id: dict[str, int] = {}
    labels: list[str] = []
    us: list[int] = []
    vs: list[int] = []

    def intern(tok: str) -> int:
        i = label_to_id.get(tok)
        if i is None:
            i = len(labels)
            label_to_id[tok] = i
            labels.append(tok)
        return i

    first = fmt.header
    for line_no, line in _iter_lines(source):
        if first:
            first = False
            continue
        text = line.strip()
        if not text or (fmt.comment and text.startswith(fmt.comment)):
            continue
        parts = text.split(fmt.delimiter)
        if fmt.delimiter is not None:
            parts = [p.strip() for p in parts]
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ParseError(
                f"expected 2 fields, got {len(parts)}: {text[:80]!r}", line_no=line_no
            )
        us.append(intern(parts[0]))
        vs.append(intern(parts[1]))

    if not us:
        raise DataError("input contains no edges")
    return Graph.from_edge_arrays(len(labels), us, vs, labels)


@dataclass
class AdoptionTable:
    """Per-node adoption day (days since platform kickoff).

    ``has_day`` flags coverage; ``days`` holds -1 where unknown.
    """

    days: np.ndarray
    has_day: np.ndarray
    skipped_unknown: int = 0

    def __post_init__(self):
        self.days = np.asarray(self.days, dtype=np.int64)
        self.has_day = np.asarray(self.has_day, dtype=bool)

    @property
    def n(self) -> int:
        return self.days.shape[0]

    @property
    def coverage(self) -> float:
        return float(self.has_day.mean()) if self.n else 0.0


@dataclass(frozen=True)
class AdoptionFormat:
    """How to read the two-column node/date file.

    ``mode='days'`` expects non-negative integer day offsets;
    ``mode='iso'`` expects ISO calendar dates and needs ``kickoff``.
    """

    mode: str = "days"
    kickoff: dt.date | None = None
    delimiter: str | None = None
    comment: str = "#"
    header: bool = False

    def __post_init__(self):
        if self.mode not in ("days", "iso"):
            raise ValueError(f"unknown date mode {self.mode!r}")
        if self.mode == "iso" and self.kickoff is None:
            raise ValueError("ISO date mode needs a kickoff date")


def load_adoption(source, graph: Graph, fmt: AdoptionFormat = AdoptionFormat()) -> AdoptionTable:
    """Read per-node adoption days aligned to the graph's dense ids.

    Rows naming nodes absent from the graph are skipped with a warning.
    Unparseable or negative dates raise :class:`ParseError` with their
    line number. If a node appears twice the last row wins.
    """
    days = np.full(graph.n, -1, dtype=np.int64)
    has = np.zeros(graph.n, dtype=bool)
    skipped = 0

    first = fmt.header
    for line_no, line in _iter_lines(source):
        if first:
            first = False
            continue
        text = line.strip()
        if not text or (fmt.comment and text.startswith(fmt.comment)):
            continue
        parts = text.split(fmt.delimiter)
        if fmt.delimiter is not None:
            parts = [p.strip() for p in parts]
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ParseError(
                f"expected 2 fields, got {len(parts)}: {text[:80]!r}", line_no=line_no
            )
        label, value = parts
        if fmt.mode == "days":
            try:
                day = int(value)
            except ValueError:
                raise ParseError(f"bad day offset {value!r}", line_no=line_no) from None
        else:
            try:
                day = (dt.date.fromisoformat(value) - fmt.kickoff).days
            except ValueError:
                raise ParseError(f"bad ISO date {value!r}", line_no=line_no) from None
        if day < 0:
            raise ParseError(f"negative day offset {day}", line_no=line_no)
        try:
            node = graph.id_of(label)
        except KeyError:
            skipped += 1
            continue
        days[node] = day
        has[node] = True

    if skipped:
        log.warning("adoption file: skipped %d rows naming unknown nodes", skipped)
    return AdoptionTable(days=days, has_day=has, skipped_unknown=skipped)


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """Unweighted hop distances from ``source``; unreachable nodes get -1."""
    if not 0 <= source < g.n:
        raise ValueError(f"node id {source} outside 0..{g.n - 1}")
    dist = np.empty(g.n, dtype=np.int32)
    _kernels.bfs_distances(g.indptr, g.indices, source, dist)
    return dist


def sample_nodes(g: Graph, fraction: float, seed: int) -> Graph:
    """Induced subgraph on a uniform sample of ``floor(fraction * n)`` nodes.

    Deterministic for a fixed seed; kept nodes are relabeled to dense
    ids in ascending original-id order, original labels retained.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction {fraction} outside (0, 1]")
    size = int(np.floor(fraction * g.n + 1e-9))
    rng = np.random.default_rng(seed)
    keep = np.sort(rng.choice(g.n, size=size, replace=False))
    member = np.zeros(g.n, dtype=bool)
    member[keep] = True
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[keep] = np.arange(size)

    rows = g.edge_rows()
    emask = member[rows] & member[g.indices]
    us = new_id[rows[emask]]
    vs = new_id[g.indices[emask]]
    labels = [g.labels[i] for i in keep]
    return Graph.from_edge_arrays(size, us, vs, labels)
