"""Graph and labeling containers, block statistics, and dataset ingestion.

Graphs are simple and undirected: a node count ``n`` plus a canonical edge
array of unordered pairs ``(u, v)`` with ``u < v``, stored sorted and
read-only.  Node ids are contiguous 0-based integers internally; loaders
keep the original ids around for reporting.  Community labels are 0-based
integers in ``{0, ..., k-1}``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "Graph",
    "Labeling",
    "BlockStats",
    "EdgeListParseError",
    "block_stats",
    "load_edge_list",
    "load_adjacency_csv",
]


class EdgeListParseError(ValueError):
    """Raised when an edge-list or adjacency file cannot be parsed."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on nodes ``0..n-1``.

    ``edges`` is an ``(E, 2)`` integer array with ``u < v`` per row, rows
    sorted lexicographically and deduplicated.  Use :meth:`from_edges` to
    build one from arbitrary pair input.  Instances are immutable and safe
    to share across threads.
    """

    n: int
    edges: np.ndarray
    original_ids: tuple | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"node count must be positive, got {self.n}")
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= self.n:
                raise ValueError("edge endpoint outside 0..n-1")
            if np.any(e[:, 0] >= e[:, 1]):
                raise ValueError("edges must satisfy u < v (no self-loops)")
            order = np.lexsort((e[:, 1], e[:, 0]))
            e = e[order]
            if np.any(np.all(e[1:] == e[:-1], axis=1)):
                raise ValueError("duplicate edges")
        e.flags.writeable = False
        object.__setattr__(self, "edges", e)
        if self.original_ids is not None and len(self.original_ids) != self.n:
            raise ValueError("original_ids length must equal n")

    @classmethod
    def from_edges(cls, n: int, pairs, original_ids: tuple | None = None) -> "Graph":
        """Build a graph from unordered node pairs, normalizing orientation.

        Self-loops and duplicate pairs are rejected here; the file loaders
        drop them leniently instead.
        """
        arr = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
        if arr.size and np.any(arr[:, 0] == arr[:, 1]):
            raise ValueError("self-loops are not allowed")
        lo = np.minimum(arr[:, 0], arr[:, 1]) if arr.size else arr[:, 0]
        hi = np.maximum(arr[:, 0], arr[:, 1]) if arr.size else arr[:, 1]
        return cls(n=n, edges=np.column_stack([lo, hi]) if arr.size else arr,
                   original_ids=original_ids)

    @classmethod
    def from_adjacency(cls, matrix) -> "Graph":
        """Build a graph from a dense 0/1 adjacency matrix.

        The matrix must be square, symmetric, and zero on the diagonal.
        """
        a = np.asarray(matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got {a.shape}")
        if not np.all((a == 0) | (a == 1)):
            raise ValueError("adjacency entries must be 0 or 1")
        if np.any(np.diag(a) != 0):
            raise ValueError("adjacency diagonal must be zero")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency matrix must be symmetric")
        iu = np.triu_indices(a.shape[0], k=1)
        mask = a[iu] != 0
        edges = np.column_stack([iu[0][mask], iu[1][mask]])
        return cls(n=a.shape[0], edges=edges)

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    def adjacency_matrix(self, dtype=np.float64) -> np.ndarray:
        """Dense symmetric adjacency matrix (freshly allocated)."""
        a = np.zeros((self.n, self.n), dtype=dtype)
        if self.edges.size:
            a[self.edges[:, 0], self.edges[:, 1]] = 1
            a[self.edges[:, 1], self.edges[:, 0]] = 1
        return a

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        lo, hi = (u, v) if u < v else (v, u)
        code = lo * self.n + hi
        codes = self.edges[:, 0] * self.n + self.edges[:, 1]
        i = np.searchsorted(codes, code)
        return bool(i < len(codes) and codes[i] == code)

    def permute_nodes(self, perm) -> "Graph":
        """Relabel node ``i`` as ``perm[i]``; used by invariance tests."""
        p = np.asarray(perm, dtype=np.int64)
        if sorted(p.tolist()) != list(range(self.n)):
            raise ValueError("perm must be a permutation of 0..n-1")
        return Graph.from_edges(self.n, p[self.edges]) if self.edges.size \
            else Graph(self.n, self.edges)


@dataclass(frozen=True, eq=False)
class Labeling:
    """Assignment of each node to one of ``k`` communities (0-based ids).

    Communities may be empty; every entry must lie in ``0..k-1``.
    """

    k: int
    assignment: np.ndarray

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        z = np.asarray(self.assignment, dtype=np.int64).ravel()
        if z.size and (z.min() < 0 or z.max() >= self.k):
            raise ValueError(f"labels must lie in 0..{self.k - 1}")
        z.flags.writeable = False
        object.__setattr__(self, "assignment", z)

    @property
    def n(self) -> int:
        return int(self.assignment.shape[0])

    @classmethod
    def all_in_one(cls, n: int) -> "Labeling":
        return cls(k=1, assignment=np.zeros(n, dtype=np.int64))


@dataclass(frozen=True, eq=False)
class BlockStats:
    """Sufficient statistics of a (graph, labeling) pair.

    ``n_a[a]`` counts nodes in community ``a``; ``n_ab[a, b]`` counts node
    pairs with one endpoint in ``a`` and the other in ``b`` (within-pairs on
    the diagonal); ``o_ab[a, b]`` counts the edges among those pairs.  Both
    matrices are stored as full symmetric arrays; criteria iterate the upper
    triangle.
    """

    k: int
    n_a: np.ndarray
    n_ab: np.ndarray
    o_ab: np.ndarray

    def __post_init__(self) -> None:
        n_a = np.asarray(self.n_a, dtype=np.int64)
        n_ab = np.asarray(self.n_ab, dtype=np.int64)
        o_ab = np.asarray(self.o_ab, dtype=np.int64)
        if n_a.shape != (self.k,):
            raise ValueError(f"n_a must have shape ({self.k},)")
        if n_ab.shape != (self.k, self.k) or o_ab.shape != (self.k, self.k):
            raise ValueError(f"n_ab and o_ab must have shape ({self.k}, {self.k})")
        if n_a.min(initial=0) < 0:
            raise ValueError("community sizes must be nonnegative")
        if not np.array_equal(n_ab, n_ab.T) or not np.array_equal(o_ab, o_ab.T):
            raise ValueError("n_ab and o_ab must be symmetric")
        if np.any(o_ab < 0) or np.any(o_ab > n_ab):
            raise ValueError("edge counts must satisfy 0 <= o_ab <= n_ab")
        for arr in (n_a, n_ab, o_ab):
            arr.flags.writeable = False
        object.__setattr__(self, "n_a", n_a)
        object.__setattr__(self, "n_ab", n_ab)
        object.__setattr__(self, "o_ab", o_ab)

    @property
    def n(self) -> int:
        return int(self.n_a.sum())

    @property
    def edge_total(self) -> int:
        return int(np.triu(self.o_ab).sum())

    def permute(self, perm) -> "BlockStats":
        """Apply a community permutation ``a -> perm[a]`` to all counts."""
        p = np.asarray(perm, dtype=np.int64)
        inv = np.empty_like(p)
        inv[p] = np.arange(self.k)
        return BlockStats(k=self.k, n_a=self.n_a[inv],
                          n_ab=self.n_ab[np.ix_(inv, inv)],
                          o_ab=self.o_ab[np.ix_(inv, inv)])


def block_stats(g: Graph, z: Labeling) -> BlockStats:
    """Community sizes, pair capacities, and edge counts for ``(g, z)``.

    Runs in O(E + k^2).  Empty communities are legal and simply produce
    zero rows.
    """
    if z.n != g.n:
        raise ValueError(f"labeling length {z.n} does not match node count {g.n}")
    k = z.k
    n_a = np.bincount(z.assignment, minlength=k).astype(np.int64)
    n_ab = np.outer(n_a, n_a)
    np.fill_diagonal(n_ab, n_a * (n_a - 1) // 2)
    o_upper = np.zeros((k, k), dtype=np.int64)
    if g.edges.size:
        za = z.assignment[g.edges[:, 0]]
        zb = z.assignment[g.edges[:, 1]]
        np.add.at(o_upper, (np.minimum(za, zb), np.maximum(za, zb)), 1)
    o_ab = o_upper + np.triu(o_upper, 1).T
    return BlockStats(k=k, n_a=n_a, n_ab=n_ab, o_ab=o_ab)


def load_edge_list(path, *, indexing: int = 1,
                   comment_prefixes: tuple[str, ...] = ("#", "%"),
                   n_nodes: int | None = None) -> Graph:
    """Read a whitespace-separated edge list into a :class:`Graph`.

    Each non-comment line holds two integer node ids (extra columns, such
    as weights, are ignored).  Self-loop lines and duplicate pairs are
    dropped with a warning carrying the count.  The node count defaults to
    the maximum id seen (plus one under 0-indexing) unless ``n_nodes``
    overrides it.

    Raises
    ------
    EdgeListParseError
        On an unparsable line (with its line number) or an id below the
        declared ``indexing`` base.
    ValueError
        If the file yields no edges at all.
    """
    if indexing not in (0, 1):
        raise ValueError("indexing must be 0 or 1")
    path = Path(path)
    seen: set[tuple[int, int]] = set()
    pairs: list[tuple[int, int]] = []
    self_loops = 0
    duplicates = 0
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith(comment_prefixes):
                continue
            parts = line.split()
            if len(parts) < 2:
                raise EdgeListParseError(
                    f"{path}:{lineno}: expected two node ids, got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise EdgeListParseError(
                    f"{path}:{lineno}: non-integer node id in {line!r}") from exc
            if u < indexing or v < indexing:
                raise EdgeListParseError(
                    f"{path}:{lineno}: node id below indexing base {indexing}; "
                    f"pass indexing=0 for 0-indexed files")
            u -= indexing
            v -= indexing
            if u == v:
                self_loops += 1
                continue
            pair = (u, v) if u < v else (v, u)
            if pair in seen:
                duplicates += 1
                continue
            seen.add(pair)
            pairs.append(pair)
    if self_loops:
        warnings.warn(f"{path}: dropped {self_loops} self-loop line(s)")
    if duplicates:
        warnings.warn(f"{path}: dropped {duplicates} duplicate pair(s)")
    if not pairs:
        raise ValueError(f"{path}: no edges found")
    max_id = max(max(p) for p in pairs)
    n = max_id + 1
    if n_nodes is not None:
        if n_nodes < n:
            raise ValueError(f"n_nodes={n_nodes} is below the largest node id ({n})")
        n = n_nodes
    original = tuple(range(indexing, n + indexing))
    return Graph.from_edges(n, pairs, original_ids=original)


def load_adjacency_csv(path) -> Graph:
    """Read an n-by-n comma-separated 0/1 adjacency matrix.

    Symmetry and a zero diagonal are validated; row-length or value errors
    report the offending line number.
    """
    path = Path(path)
    rows: list[list[int]] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values = [int(tok) for tok in line.split(",")]
            except ValueError as exc:
                raise EdgeListParseError(
                    f"{path}:{lineno}: non-integer entry") from exc
            if any(v not in (0, 1) for v in values):
                raise EdgeListParseError(
                    f"{path}:{lineno}: entries must be 0 or 1")
            rows.append(values)
    if not rows:
        raise ValueError(f"{path}: empty adjacency file")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise EdgeListParseError(f"{path}: matrix is not square ({n} rows)")
    return Graph.from_adjacency(np.asarray(rows, dtype=np.int64))
