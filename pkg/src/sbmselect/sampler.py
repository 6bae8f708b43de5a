"""Stochastic block model parameters and exact sampling.

A model is a community-weight vector ``pi`` and a symmetric edge-probability
matrix ``P``; node labels are drawn i.i.d. from ``pi`` and each unordered
node pair receives an edge independently with probability ``P[z_u, z_v]``.
Sampling uses a counter-based generator so the same seed reproduces the
same draw on any platform, and disjoint seeds can be derived for parallel
replications without sharing stream state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, Labeling

__all__ = [
    "SBMParams",
    "planted_partition",
    "derive_seed",
    "sample_labels",
    "sample_graph",
    "sample_sbm",
]

_PROB_TOL = 1e-12


def _validated_pi(pi) -> np.ndarray:
    pi = np.asarray(pi, dtype=np.float64).ravel()
    if pi.size < 1:
        raise ValueError("pi must be non-empty")
    if np.any(pi <= 0):
        raise ValueError("community weights must be strictly positive")
    if abs(pi.sum() - 1.0) > _PROB_TOL:
        raise ValueError(f"pi must sum to 1, got {pi.sum()!r}")
    return pi


def _validated_P(P, k: int) -> np.ndarray:
    p = np.asarray(P, dtype=np.float64)
    if p.shape != (k, k):
        raise ValueError(f"P must have shape ({k}, {k}), got {p.shape}")
    if not np.allclose(p, p.T, rtol=0.0, atol=_PROB_TOL):
        raise ValueError("P must be symmetric")
    if np.any(p < -_PROB_TOL) or np.any(p > 1.0 + _PROB_TOL):
        raise ValueError("edge probabilities must lie in [0, 1]")
    return np.clip(p, 0.0, 1.0)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class SBMParams:
    """Community weights ``pi`` and symmetric connectivity matrix ``P``.

    ``pi`` must be strictly positive and sum to one; ``P`` entries must lie
    in [0, 1].  An optional sparsity factor ``rho`` records that ``P`` was
    built as ``rho * S`` from a base matrix ``S``, for sequences of
    increasingly sparse models.
    """

    pi: np.ndarray
    P: np.ndarray
    rho: float | None = field(default=None)
    S: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        pi = _validated_pi(self.pi)
        p = _validated_P(self.P, pi.size)
        if self.S is not None:
            if self.rho is None:
                raise ValueError("S requires rho")
            s = np.asarray(self.S, dtype=np.float64)
            if s.shape != p.shape:
                raise ValueError("S must match P in shape")
            if self.rho < 0 or self.rho * s.max(initial=0.0) > 1.0 + _PROB_TOL:
                raise ValueError("rho * max(S) must lie in [0, 1]")
            object.__setattr__(self, "S", _frozen(s))
        object.__setattr__(self, "pi", _frozen(pi))
        object.__setattr__(self, "P", _frozen(p))

    @property
    def k(self) -> int:
        return int(self.pi.shape[0])

    @classmethod
    def from_sparsity(cls, pi, S, rho: float) -> "SBMParams":
        """Model with ``P = rho * S``, keeping the base matrix for reference."""
        s = np.asarray(S, dtype=np.float64)
        return cls(pi=pi, P=rho * s, rho=rho, S=s)


def planted_partition(k: int, a: float, b: float, pi=None) -> SBMParams:
    """Model with within probability ``a`` and between probability ``b``.

    ``pi`` defaults to the balanced vector ``(1/k, ..., 1/k)``.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    p = np.full((k, k), float(b))
    np.fill_diagonal(p, float(a))
    if pi is None:
        pi = np.full(k, 1.0 / k)
    return SBMParams(pi=pi, P=p)


def derive_seed(seed: int, index: int) -> int:
    """Child seed ``seed XOR index`` for replication ``index``.

    Distinct indices give distinct 64-bit keys, and the counter-based
    generator guarantees independent streams for distinct keys, so parallel
    replications never share random state.
    """
    if index < 0:
        raise ValueError("index must be nonnegative")
    return int(np.uint64(seed) ^ np.uint64(index))


def _rng(seed) -> np.random.Generator:
    """Counter-based generator from an int seed; pass a Generator through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def sample_labels(n: int, pi, seed) -> Labeling:
    """Draw ``n`` community labels i.i.d. from the weight vector ``pi``."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    pi = _validated_pi(pi)
    rng = _rng(seed)
    cum = np.cumsum(pi)
    z = np.searchsorted(cum, rng.random(n), side="right")
    # Guard against cum[-1] rounding just below 1.0.
    return Labeling(k=pi.size, assignment=np.minimum(z, pi.size - 1))


def sample_graph(z: Labeling, P, seed) -> Graph:
    """Draw each unordered node pair independently given fixed labels.

    Pairs are consumed in the fixed (i < j) row-major order, so a seed
    fully determines the graph regardless of thread count.
    """
    p = _validated_P(P, z.k)
    rng = _rng(seed)
    n = z.n
    iu, ju = np.triu_indices(n, k=1)
    probs = p[z.assignment[iu], z.assignment[ju]]
    keep = rng.random(iu.shape[0]) < probs
    return Graph(n=n, edges=np.column_stack([iu[keep], ju[keep]]))


def sample_sbm(params: SBMParams, n: int, seed) -> tuple[Graph, Labeling]:
    """Draw labels then edges from one generator so a seed fixes the pair."""
    rng = _rng(seed)
    z = sample_labels(n, params.pi, rng)
    g = sample_graph(z, params.P, rng)
    return g, z
