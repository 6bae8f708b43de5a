"""Scoring math for community-count selection.

Implements the multinomial stochastic complexity and its O(m + Q)
recursion, the maximized conditional and label log-likelihoods, the
decomposed normalized-maximum-likelihood (DNML) code length, the matching
penalty functions, and two baselines: a corrected BIC over the complete
likelihood (CBIC) and a conjugate integrated likelihood (IL).

Everything works in natural-log space.  Per-term factorials go through
``gammaln`` so block-pair counts up to n^2 (about 1.5e6 for the largest
supported graphs) never overflow, and the conventions 0*log(0) = 0 and
(0/0)^0 = 1 apply uniformly, so empty communities contribute zero
likelihood and zero complexity instead of poisoning a score.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp, xlogy

from .graph import BlockStats

__all__ = [
    "METHODS",
    "CriterionScore",
    "PenaltyConfig",
    "log_multinomial_complexity",
    "clear_complexity_cache",
    "cond_loglik_sup",
    "label_loglik_sup",
    "log_dnml",
    "pen_dnml",
    "pen_nml",
    "log_integrated_graph_lik",
    "log_integrated_label_lik",
    "log_integrated_lik",
    "score",
]

METHODS = ("dnml", "cbic", "il")

_HALF_LGAMMA = float(gammaln(0.5))


@dataclass(frozen=True)
class PenaltyConfig:
    """Tuning constants shared by the criteria.

    ``epsilon`` is the slack exponent in the DNML/NML penalties and
    ``cbic_lambda`` scales the CBIC penalty.  The IL baseline charges the
    NML-style penalty by default; pass ``il_penalty`` to substitute another
    ``(k, n, epsilon) -> float`` function.
    """

    epsilon: float = 0.5
    cbic_lambda: float = 1.0
    il_penalty: object = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not self.cbic_lambda > 0:
            raise ValueError(
                f"cbic_lambda must be positive, got {self.cbic_lambda}")


@dataclass(frozen=True)
class CriterionScore:
    """One criterion evaluation at a candidate k.

    ``penalized`` is always derived as ``log_score - penalty`` so the
    defining identity cannot drift.
    """

    k: int
    method: str
    log_score: float
    penalty: float
    penalized: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "penalized", self.log_score - self.penalty)


def _check_mq(m: int, Q: int) -> None:
    if m < 0 or m != int(m):
        raise ValueError(f"m must be a nonnegative integer, got {m}")
    if Q < 1 or Q != int(Q):
        raise ValueError(f"Q must be a positive integer, got {Q}")


@functools.lru_cache(maxsize=None)
def _log_c2(m: int) -> float:
    """log C_MN(m, 2) by direct log-sum-exp over the binomial split t."""
    if m == 0:
        return 0.0
    t = np.arange(m + 1, dtype=np.float64)
    log_binom = gammaln(m + 1) - gammaln(t + 1) - gammaln(m - t + 1)
    terms = log_binom + xlogy(t, t / m) + xlogy(m - t, (m - t) / m)
    return float(logsumexp(terms))


def log_multinomial_complexity(m: int, Q: int) -> float:
    """log of the multinomial stochastic complexity C_MN(m, Q).

    C_MN(m, Q) sums the maximized multinomial likelihood
    prod_a (m_a / m)^{m_a} over all Q^m label sequences of length m.
    Base cases C_MN(m, 1) = 1 and the direct Q = 2 sum feed the recursion
    C_MN(m, Q) = C_MN(m, Q-1) + (m / (Q-2)) * C_MN(m, Q-2), evaluated in
    log space, for total cost O(m + Q).
    """
    _check_mq(m, Q)
    if Q == 1 or m == 0:
        return 0.0
    prev, cur = 0.0, _log_c2(m)
    for q in range(3, Q + 1):
        prev, cur = cur, float(np.logaddexp(cur, np.log(m / (q - 2)) + prev))
    return cur


def clear_complexity_cache() -> None:
    """Drop memoized C_MN(m, 2) values; used by timing measurements."""
    _log_c2.cache_clear()


def _upper(stats: BlockStats) -> tuple[np.ndarray, np.ndarray]:
    iu = np.triu_indices(stats.k)
    return stats.n_ab[iu], stats.o_ab[iu]


def cond_loglik_sup(stats: BlockStats) -> float:
    """Maximized log-likelihood of the edges given the labels.

    Each block pair contributes o*log(o/n_ab) + (n_ab-o)*log(1 - o/n_ab)
    at the per-pair maximizer o/n_ab; pairs with n_ab = 0 contribute 0.
    """
    n_ab, o_ab = _upper(stats)
    mask = n_ab > 0
    n_ab = n_ab[mask].astype(np.float64)
    o_ab = o_ab[mask].astype(np.float64)
    ratio = o_ab / n_ab
    return float(np.sum(xlogy(o_ab, ratio) + xlogy(n_ab - o_ab, 1.0 - ratio)))


def _checked_n(stats: BlockStats, n: int | None) -> int:
    if n is None:
        return stats.n
    if n != stats.n:
        raise ValueError(f"n={n} does not match the stats total {stats.n}")
    return n


def label_loglik_sup(stats: BlockStats, n: int | None = None) -> float:
    """Maximized log-likelihood of the labels: sum_a n_a * log(n_a / n)."""
    n = _checked_n(stats, n)
    n_a = stats.n_a.astype(np.float64)
    return float(np.sum(xlogy(n_a, n_a / n)))


def log_dnml(stats: BlockStats, n: int | None = None) -> float:
    """log DNML code probability of a (graph, labeling) pair.

    Maximized label and conditional log-likelihoods, minus the label-side
    complexity log C_MN(n, k), minus the graph-side complexity
    sum_{a<=b} log C_MN(n_ab, 2).
    """
    n = _checked_n(stats, n)
    n_ab, _ = _upper(stats)
    graph_complexity = sum(log_multinomial_complexity(int(m), 2) for m in n_ab)
    return (label_loglik_sup(stats, n) + cond_loglik_sup(stats)
            - log_multinomial_complexity(n, stats.k) - graph_complexity)


def _pen_coefficient(k: int, epsilon: float) -> float:
    return k * (k - 1) * (2 * k - 1) / 12.0 + (k - 1) * (k + 1 + epsilon) / 2.0


def _check_pen_args(k: int, n: int, epsilon: float) -> None:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")


def pen_dnml(k: int, n: int, epsilon: float = 0.5) -> float:
    """DNML penalty: [k(k-1)(2k-1)/12 + (k-1)(k+1+eps)/2] log n + n log (k-1)!."""
    _check_pen_args(k, n, epsilon)
    return _pen_coefficient(k, epsilon) * np.log(n) + n * float(gammaln(k))


def pen_nml(k: int, n: int, epsilon: float = 0.5) -> float:
    """NML-style penalty: the DNML penalty without the n log (k-1)! term."""
    _check_pen_args(k, n, epsilon)
    return _pen_coefficient(k, epsilon) * np.log(n)


def log_integrated_graph_lik(stats: BlockStats) -> float:
    """log of the edge likelihood integrated over Beta(1/2, 1/2) priors.

    Per block pair the Bernoulli-Beta conjugate integral gives
    B(o + 1/2, n_ab - o + 1/2) / B(1/2, 1/2); pairs with n_ab = 0 cancel
    exactly against their prior normalizer.
    """
    n_ab, o_ab = _upper(stats)
    n_ab = n_ab.astype(np.float64)
    o_ab = o_ab.astype(np.float64)
    terms = (gammaln(o_ab + 0.5) + gammaln(n_ab - o_ab + 0.5)
             - gammaln(n_ab + 1.0))
    return float(np.sum(terms)) - stats.k * (stats.k + 1) * _HALF_LGAMMA


def log_integrated_label_lik(stats: BlockStats, n: int | None = None) -> float:
    """log of the label likelihood integrated over a Dirichlet(1/2) prior."""
    n = _checked_n(stats, n)
    k = stats.k
    return float(gammaln(k / 2.0) - k * _HALF_LGAMMA
                 + np.sum(gammaln(stats.n_a + 0.5)) - gammaln(n + k / 2.0))


def log_integrated_lik(stats: BlockStats, n: int | None = None) -> float:
    """Joint integrated log-likelihood of the (graph, labeling) pair."""
    return log_integrated_graph_lik(stats) + log_integrated_label_lik(stats, n)


def score(method: str, stats: BlockStats, n: int | None = None,
          config: PenaltyConfig | None = None) -> CriterionScore:
    """Penalized criterion value at the stats' candidate k.

    ``dnml``: log DNML minus the DNML penalty.  ``cbic``: maximized
    complete log-likelihood minus lambda * [(k(k+1)/2) log n + n log k].
    ``il``: integrated log-likelihood minus the NML-style penalty (or the
    configured override).
    """
    n = _checked_n(stats, n)
    config = config if config is not None else PenaltyConfig()
    k = stats.k
    tag = method.lower()
    if tag == "dnml":
        log_score = log_dnml(stats, n)
        penalty = pen_dnml(k, n, config.epsilon)
    elif tag == "cbic":
        log_score = cond_loglik_sup(stats) + label_loglik_sup(stats, n)
        penalty = config.cbic_lambda * (k * (k + 1) / 2.0 * np.log(n)
                                        + n * np.log(k))
    elif tag == "il":
        log_score = log_integrated_lik(stats, n)
        pen_fn = config.il_penalty if config.il_penalty is not None else pen_nml
        penalty = pen_fn(k, n, config.epsilon)
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    return CriterionScore(k=k, method=tag, log_score=float(log_score),
                          penalty=float(penalty))
