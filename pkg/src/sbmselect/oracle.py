"""Brute-force reference computations for tiny instances.

These enumerate every labeling or every graph outright and work in plain
linear-space floating point, independent of the log-space kernels they
validate.  They exist for tests: exact identities (complexity sums,
normalization to one, product decompositions) hold on instances small
enough to enumerate, so agreement here certifies the fast implementations.
A size guard rejects anything beyond a few nodes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .graph import Graph, Labeling, block_stats
from .criteria import log_dnml

__all__ = [
    "TinyInstanceBound",
    "iter_graphs",
    "iter_labelings",
    "brute_c_mn",
    "brute_c_dnml_A",
    "brute_dnml_normalization",
    "brute_c_nmcl",
]

_MAX_BRUTE_M = 8
_MAX_BRUTE_Q = 4


@dataclass(frozen=True)
class TinyInstanceBound:
    """Enumeration guard: at most 2^(n(n-1)/2) = 64 graphs and k^n = 81
    labelings, i.e. n <= 4 and k <= 3."""

    max_nodes: int = 4
    max_k: int = 3

    def __post_init__(self) -> None:
        if self.max_nodes > 4 or self.max_k > 3:
            raise ValueError("bound exceeds the supported tiny-instance grid")
        pairs = self.max_nodes * (self.max_nodes - 1) // 2
        if 2 ** pairs > 64 or self.max_k ** self.max_nodes > 81:
            raise ValueError("enumeration size out of bounds")

    def check(self, n: int, k: int = 1) -> None:
        if not 1 <= n <= self.max_nodes:
            raise ValueError(f"n={n} outside tiny-instance bound {self.max_nodes}")
        if not 1 <= k <= self.max_k:
            raise ValueError(f"k={k} outside tiny-instance bound {self.max_k}")


_BOUND = TinyInstanceBound()


def iter_graphs(n: int):
    """Every simple graph on n nodes, one per subset of the node pairs."""
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(2 ** len(pairs)):
        chosen = [p for i, p in enumerate(pairs) if bits >> i & 1]
        yield Graph.from_edges(n, chosen)


def iter_labelings(n: int, k: int):
    """Every assignment of n nodes to k communities (k^n of them)."""
    for combo in itertools.product(range(k), repeat=n):
        yield Labeling(k=k, assignment=list(combo))


def _pair_counts(z: Labeling) -> dict[tuple[int, int], int]:
    """Capacity n_ab per unordered block pair, counted pair by pair."""
    counts: dict[tuple[int, int], int] = {}
    lab = z.assignment
    for i, j in itertools.combinations(range(z.n), 2):
        key = (min(lab[i], lab[j]), max(lab[i], lab[j]))
        counts[key] = counts.get(key, 0) + 1
    return counts


def _edge_counts(g: Graph, z: Labeling) -> dict[tuple[int, int], int]:
    counts: dict[tuple[int, int], int] = {}
    lab = z.assignment
    for u, v in g.edges:
        key = (min(lab[u], lab[v]), max(lab[u], lab[v]))
        counts[key] = counts.get(key, 0) + 1
    return counts


def _sup_cond_lik(g: Graph, z: Labeling) -> float:
    """Maximized edge likelihood for fixed labels, 0^0 = 1 throughout."""
    n_ab = _pair_counts(z)
    o_ab = _edge_counts(g, z)
    value = 1.0
    for key, cap in n_ab.items():
        o = o_ab.get(key, 0)
        if 0 < o:
            value *= (o / cap) ** o
        if o < cap:
            value *= ((cap - o) / cap) ** (cap - o)
    return value


def _sup_label_lik(z: Labeling) -> float:
    value = 1.0
    for a in range(z.k):
        n_a = int((z.assignment == a).sum())
        if n_a:
            value *= (n_a / z.n) ** n_a
    return value


def brute_c_mn(m: int, Q: int) -> float:
    """Multinomial stochastic complexity by summing all Q^m sequences."""
    if not 0 <= m <= _MAX_BRUTE_M:
        raise ValueError(f"m must lie in 0..{_MAX_BRUTE_M}, got {m}")
    if not 1 <= Q <= _MAX_BRUTE_Q:
        raise ValueError(f"Q must lie in 1..{_MAX_BRUTE_Q}, got {Q}")
    total = 0.0
    for seq in itertools.product(range(Q), repeat=m):
        term = 1.0
        for a in range(Q):
            c = seq.count(a)
            if c:
                term *= (c / m) ** c
        total += term
    return total


def brute_c_dnml_A(z: Labeling, n: int,
                   bound: TinyInstanceBound = _BOUND) -> float:
    """Graph-side complexity: sum over all n-node graphs of the maximized
    conditional likelihood under the fixed labeling."""
    bound.check(n, z.k)
    if z.n != n:
        raise ValueError(f"labeling length {z.n} does not match n={n}")
    return sum(_sup_cond_lik(g, z) for g in iter_graphs(n))


def brute_dnml_normalization(n: int, k: int,
                             bound: TinyInstanceBound = _BOUND) -> float:
    """Total DNML probability over every (labeling, graph) pair.

    Uses the production block statistics and log-DNML, so a total of 1
    certifies that the fast code length really normalizes.
    """
    bound.check(n, k)
    total = 0.0
    for z in iter_labelings(n, k):
        for g in iter_graphs(n):
            total += math.exp(log_dnml(block_stats(g, z), n))
    return total


def brute_c_nmcl(n: int, k: int, bound: TinyInstanceBound = _BOUND) -> float:
    """Complete-likelihood complexity: sum over every (labeling, graph)
    pair of the jointly maximized likelihood."""
    bound.check(n, k)
    total = 0.0
    for z in iter_labelings(n, k):
        label_term = _sup_label_lik(z)
        for g in iter_graphs(n):
            total += label_term * _sup_cond_lik(g, z)
    return total
