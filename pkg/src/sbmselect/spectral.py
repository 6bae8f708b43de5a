"""Plug-in community detection by adjacency spectral clustering.

The detector embeds nodes as rows of the eigenvectors belonging to the k
largest-magnitude eigenvalues of the (unnormalized) adjacency matrix, then
clusters the rows with a deterministic k-means.  Every tie-break is fixed
(stable eigenvalue ordering, per-column sign convention, lowest-index
cluster assignment) so a graph, a candidate k, and a seed fully determine
the output labeling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, Labeling

__all__ = [
    "DetectorConfig",
    "adjacency_eigendecomposition",
    "leading_eigenvectors",
    "kmeans",
    "spectral_cluster",
]


@dataclass(frozen=True)
class DetectorConfig:
    """Knobs for the spectral detector.

    ``eig_tolerance`` is reserved for iterative eigensolvers; the dense
    solver used here ignores it but the knob stays so configs round-trip.
    """

    eig_tolerance: float = 1e-8
    kmeans_restarts: int = 10
    kmeans_max_iter: int = 300
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.eig_tolerance > 0:
            raise ValueError("eig_tolerance must be positive")
        if self.kmeans_restarts < 1:
            raise ValueError("kmeans_restarts must be at least 1")
        if self.kmeans_max_iter < 1:
            raise ValueError("kmeans_max_iter must be at least 1")


def adjacency_eigendecomposition(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Full symmetric eigendecomposition of the adjacency matrix.

    Returns (eigenvalues ascending, eigenvector columns).  O(n^3); callers
    sweeping several k should compute this once and slice per candidate.
    """
    return np.linalg.eigh(g.adjacency_matrix())


def leading_eigenvectors(g: Graph, k: int,
                         eig: tuple[np.ndarray, np.ndarray] | None = None
                         ) -> np.ndarray:
    """Orthonormal eigenvectors of the k largest-magnitude eigenvalues.

    Columns are ordered by decreasing |eigenvalue| (stable under ties) and
    sign-fixed so each column's largest-magnitude entry is positive, which
    pins down the embedding whenever eigenvalues are simple.
    """
    if not 1 <= k <= g.n:
        raise ValueError(f"k must lie in 1..{g.n}, got {k}")
    values, vectors = adjacency_eigendecomposition(g) if eig is None else eig
    order = np.argsort(-np.abs(values), kind="stable")[:k]
    cols = vectors[:, order].copy()
    for j in range(k):
        lead = np.argmax(np.abs(cols[:, j]))
        if cols[lead, j] < 0:
            cols[:, j] = -cols[:, j]
    return cols


def _farthest_point_centers(rows: np.ndarray, k: int,
                            rng: np.random.Generator) -> np.ndarray:
    """Greedy seeding: random first center, then repeatedly the point
    farthest from its nearest chosen center (first index on ties)."""
    n = rows.shape[0]
    centers = np.empty(k, dtype=np.int64)
    centers[0] = rng.integers(n)
    nearest = _sq_distances(rows, rows[centers[0]][None, :])[:, 0]
    for j in range(1, k):
        centers[j] = int(np.argmax(nearest))
        d = _sq_distances(rows, rows[centers[j]][None, :])[:, 0]
        nearest = np.minimum(nearest, d)
    return rows[centers].copy()


def _sq_distances(rows: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = rows[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _repair_empty(assign: np.ndarray, dist_to_own: np.ndarray, k: int) -> None:
    """Give each empty cluster the point farthest from its centroid,
    stealing only from clusters that keep at least one member."""
    counts = np.bincount(assign, minlength=k)
    for c in np.flatnonzero(counts == 0):
        movable = counts[assign] >= 2
        if not movable.any():
            continue
        d = np.where(movable, dist_to_own, -np.inf)
        i = int(np.argmax(d))
        counts[assign[i]] -= 1
        assign[i] = c
        counts[c] += 1
        dist_to_own[i] = 0.0


def _lloyd(rows: np.ndarray, k: int, rng: np.random.Generator,
           max_iter: int) -> tuple[np.ndarray, float]:
    n = rows.shape[0]
    centers = _farthest_point_centers(rows, k, rng)
    assign = np.full(n, -1, dtype=np.int64)
    for _ in range(max_iter):
        dist = _sq_distances(rows, centers)
        new_assign = np.argmin(dist, axis=1)
        _repair_empty(new_assign, dist[np.arange(n), new_assign], k)
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for c in range(k):
            members = rows[assign == c]
            if members.shape[0]:
                centers[c] = members.mean(axis=0)
    dist = _sq_distances(rows, centers)
    wcss = float(dist[np.arange(n), assign].sum())
    return assign, wcss


def kmeans(rows: np.ndarray, k: int,
           config: DetectorConfig | None = None) -> Labeling:
    """Best-of-restarts Lloyd clustering of the embedding rows.

    Each restart draws its first center from a child seed of the config
    seed; the labeling with the strictly smallest within-cluster sum of
    squares wins, earlier restarts keeping ties.  Empty clusters are legal
    in the result only when there are fewer distinct rows than k and no
    donor cluster remains.
    """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2:
        raise ValueError("rows must be a 2-d array")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    n = rows.shape[0]
    if k == 1 or n == 0:
        return Labeling(k=max(k, 1), assignment=np.zeros(n, dtype=np.int64))
    config = config if config is not None else DetectorConfig()
    best_assign: np.ndarray | None = None
    best_wcss = np.inf
    for r in range(config.kmeans_restarts):
        key = np.uint64(config.seed) ^ np.uint64(r)
        rng = np.random.Generator(np.random.Philox(key=key))
        assign, wcss = _lloyd(rows, min(k, n), rng, config.kmeans_max_iter)
        if wcss < best_wcss:
            best_assign, best_wcss = assign, wcss
    return Labeling(k=k, assignment=best_assign)


def spectral_cluster(g: Graph, k: int, config: DetectorConfig | None = None,
                     eig: tuple[np.ndarray, np.ndarray] | None = None
                     ) -> Labeling:
    """Community labels for candidate k via spectral embedding + k-means.

    k = 1 short-circuits to the single-community labeling without touching
    the eigensolver.
    """
    if not 1 <= k <= g.n:
        raise ValueError(f"k must lie in 1..{g.n}, got {k}")
    if k == 1:
        return Labeling.all_in_one(g.n)
    return kmeans(leading_eigenvectors(g, k, eig), k, config)
