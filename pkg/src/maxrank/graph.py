"""Immutable directed graph stored as backlink (in-) adjacency.

Nodes are dense integer ids ``0..N-1``.  For every node ``j`` the sorted,
duplicate-free list of sources linking to it is kept in one contiguous
array (``indptr``/``indices``, the CSR layout with destinations as rows).
Only out-degrees are kept for the forward direction.
"""

from __future__ import annotations

import gzip
import io
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np


class GraphError(ValueError):
    """Raised for malformed input or invalid node references."""


class ParseError(GraphError):
    def __init__(self, lineno: int, line: str, reason: str):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line!r}")


@dataclass(frozen=True)
class IngestOptions:
    drop_self_loops: bool = True


@dataclass(frozen=True, eq=False)
class Graph:
    indptr: np.ndarray
    indices: np.ndarray
    out_degree: np.ndarray
    labels: tuple[str, ...] | None = None
    _label_index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for arr in (self.indptr, self.indices, self.out_degree):
            arr.setflags(write=False)
        if self.labels is not None and self._label_index is None:
            object.__setattr__(
                self, "_label_index", {lab: i for i, lab in enumerate(self.labels)}
            )

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]] | np.ndarray,
        labels: Sequence[str] | None = None,
        drop_self_loops: bool = True,
    ) -> "Graph":
        """Build a graph from ``(src, dst)`` integer pairs over ``n`` nodes.

        Duplicates are collapsed.  Self-loops are dropped unless
        ``drop_self_loops`` is false.
        """
        if n <= 0:
            raise GraphError("graph has no nodes")
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                       dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise GraphError(f"edge endpoint outside [0, {n})")
        if drop_self_loops and e.size:
            e = e[e[:, 0] != e[:, 1]]
        if e.size:
            # sort by (dst, src) then dedupe
            order = np.lexsort((e[:, 0], e[:, 1]))
            e = e[order]
            keep = np.ones(len(e), dtype=bool)
            keep[1:] = np.any(e[1:] != e[:-1], axis=1)
            e = e[keep]
        src = e[:, 0] if e.size else np.empty(0, dtype=np.int64)
        dst = e[:, 1] if e.size else np.empty(0, dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(dst, minlength=n), out=indptr[1:])
        out_degree = np.bincount(src, minlength=n).astype(np.int64)
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise GraphError("label count does not match node count")
            if len(set(labels)) != n:
                raise GraphError("labels must be unique")
        return cls(indptr, np.ascontiguousarray(src), out_degree, labels)

    @property
    def node_count(self) -> int:
        return len(self.out_degree)

    N = node_count

    @property
    def edge_count(self) -> int:
        return len(self.indices)

    @property
    def dangling(self) -> np.ndarray:
        """Ids of nodes without forward links, ascending."""
        return np.flatnonzero(self.out_degree == 0)

    @property
    def in_degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    def backlinks(self, j: int) -> np.ndarray:
        """Sorted sources linking to ``j``."""
        j = self._check(j)
        return self.indices[self.indptr[j]:self.indptr[j + 1]]

    def transition_probability(self, i: int, j: int) -> float:
        i = self._check(i)
        j = self._check(j)
        if self.out_degree[i] == 0:
            raise GraphError(f"node {i} is dangling; its mass is spread by the ranker")
        b = self.backlinks(j)
        k = np.searchsorted(b, i)
        if k == len(b) or b[k] != i:
            raise GraphError(f"no edge ({i}, {j})")
        return 1.0 / self.out_degree[i]

    def edges(self) -> np.ndarray:
        """All edges as an ``(E, 2)`` array sorted by ``(src, dst)``."""
        dst = np.repeat(np.arange(self.node_count), self.in_degree)
        e = np.column_stack([self.indices, dst])
        return e[np.lexsort((e[:, 1], e[:, 0]))]

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def node_id(self, label: str) -> int:
        if self._label_index is None:
            return self._check(int(label))
        try:
            return self._label_index[label]
        except KeyError:
            raise GraphError(f"unknown node label {label!r}") from None

    def _check(self, i) -> int:
        i = int(i)
        if not 0 <= i < self.node_count:
            raise GraphError(f"node id {i} outside [0, {self.node_count})")
        return i

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.out_degree, other.out_degree)
            and self.labels == other.labels
        )

    __hash__ = None

    def __repr__(self):
        return f"Graph(N={self.node_count}, E={self.edge_count})"


def parse_edge_list(stream: TextIO | Iterable[str],
                    options: IngestOptions | None = None) -> Graph:
    """Read a ``src dst`` edge list.

    Tokens are split on any whitespace.  ``#`` lines and blank lines are
    skipped.  Labels are interned in order of first appearance.
    """
    options = options or IngestOptions()
    ids: dict[str, int] = {}
    edges = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) != 2:
            raise ParseError(lineno, line, f"expected 2 tokens, got {len(toks)}")
        a = ids.setdefault(toks[0], len(ids))
        b = ids.setdefault(toks[1], len(ids))
        edges.append((a, b))
    if not ids:
        raise GraphError("graph has no nodes")
    return Graph.from_edges(len(ids), edges, labels=list(ids),
                            drop_self_loops=options.drop_self_loops)


def open_text(path: str | os.PathLike) -> TextIO:
    path = os.fspath(path)
    if path.endswith(".gz"):
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, encoding="utf-8")


def read_edge_list(path: str | os.PathLike,
                   options: IngestOptions | None = None) -> Graph:
    with open_text(path) as fh:
        return parse_edge_list(fh, options)


def write_canonical(g: Graph, stream: TextIO) -> None:
    """Edge list sorted by integer ``(src, dst)`` with a header comment.

    Node ids are written, not labels; labels go to a sidecar table.
    """
    stream.write(f"# nodes={g.node_count} edges={g.edge_count}\n")
    for s, d in g.edges():
        stream.write(f"{s}\t{d}\n")


def write_labels(g: Graph, stream: TextIO) -> None:
    for i in range(g.node_count):
        stream.write(f"{i}\t{g.label(i)}\n")


def read_canonical(edges: TextIO, labels: TextIO | None = None) -> Graph:
    """Inverse of :func:`write_canonical` (plus optional sidecar labels)."""
    n = None
    pairs = []
    for lineno, raw in enumerate(edges, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                if tok.startswith("nodes="):
                    n = int(tok[len("nodes="):])
            continue
        toks = line.split()
        if len(toks) != 2:
            raise ParseError(lineno, line, f"expected 2 tokens, got {len(toks)}")
        pairs.append((int(toks[0]), int(toks[1])))
    if n is None:
        raise GraphError("canonical edge list lacks '# nodes=N' header")
    names = None
    if labels is not None:
        names = [None] * n
        for raw in labels:
            if raw.strip():
                i, lab = raw.rstrip("\n").split("\t", 1)
                names[int(i)] = lab
    # self-loops cannot appear in a canonical file unless kept at ingest
    return Graph.from_edges(n, pairs, labels=names, drop_self_loops=False)
