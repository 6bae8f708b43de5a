"""Community-count selection: sweep candidate k, score, take the argmax.

For each k in 1..k_max the selector obtains plug-in labels from the
spectral detector (k = 1 short-circuits to the single community), reduces
the graph to block statistics, and evaluates the requested penalized
criterion.  The estimate is the k with the largest penalized score, ties
going to the smaller k.  Detection and criterion wall times are tracked
separately because detection dominates (O(n^3) versus O(n^2) per k).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .criteria import METHODS, CriterionScore, PenaltyConfig, score
from .graph import Graph, Labeling, block_stats
from .spectral import DetectorConfig, adjacency_eigendecomposition, spectral_cluster

__all__ = ["KRecord", "SelectionResult", "select_k"]


@dataclass(frozen=True)
class KRecord:
    """Outcome of one candidate k: labels, scores, per-phase time.

    A failed candidate keeps its error message in ``error`` and carries no
    score; it is reported but never wins the argmax.
    """

    k: int
    labeling: Labeling | None
    log_score: float | None
    penalty: float | None
    penalized: float | None
    detection_ns: int
    criterion_ns: int
    error: str | None = None


@dataclass(frozen=True)
class SelectionResult:
    """Full diagnostics of a selection run."""

    method: str
    k_max: int
    records: tuple[KRecord, ...]
    k_hat: int
    detection_ns: int
    criterion_ns: int
    config: PenaltyConfig = field(repr=False, default=None)

    @property
    def best(self) -> KRecord:
        for rec in self.records:
            if rec.k == self.k_hat:
                return rec
        raise LookupError(f"no record for k_hat={self.k_hat}")


def select_k(g: Graph, k_max: int | None = None, method: str = "dnml",
             penalty: PenaltyConfig | None = None,
             detector: DetectorConfig | None = None,
             score_fn=None) -> SelectionResult:
    """Estimate the number of communities of ``g``.

    ``k_max`` defaults to min(n, 10).  ``penalty`` and ``detector`` default
    to their standard configs.  ``score_fn`` substitutes the criterion
    evaluator (same signature as :func:`sbmselect.criteria.score`); tests
    use it to isolate penalty behavior.

    The full eigendecomposition is computed once and shared across
    candidates, so detection cost is one O(n^3) solve plus k-means per k.
    """
    method = method.lower()
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if k_max is None:
        k_max = min(g.n, 10)
    if not 1 <= k_max <= g.n:
        raise ValueError(f"k_max must lie in 1..{g.n}, got {k_max}")
    penalty = penalty if penalty is not None else PenaltyConfig()
    detector = detector if detector is not None else DetectorConfig()
    evaluate = score_fn if score_fn is not None else score

    eig = None
    eig_ns = 0
    if k_max >= 2:
        t0 = time.perf_counter_ns()
        eig = adjacency_eigendecomposition(g)
        eig_ns = time.perf_counter_ns() - t0

    records: list[KRecord] = []
    for k in range(1, k_max + 1):
        t0 = time.perf_counter_ns()
        try:
            z = spectral_cluster(g, k, detector, eig)
        except Exception as exc:  # record and move on; never skip silently
            t1 = time.perf_counter_ns()
            records.append(KRecord(k=k, labeling=None, log_score=None,
                                   penalty=None, penalized=None,
                                   detection_ns=t1 - t0, criterion_ns=0,
                                   error=f"detection failed: {exc}"))
            continue
        t1 = time.perf_counter_ns()
        try:
            stats = block_stats(g, z)
            sc: CriterionScore = evaluate(method, stats, g.n, penalty)
            t2 = time.perf_counter_ns()
            records.append(KRecord(k=k, labeling=z, log_score=sc.log_score,
                                   penalty=sc.penalty, penalized=sc.penalized,
                                   detection_ns=t1 - t0, criterion_ns=t2 - t1))
        except Exception as exc:
            t2 = time.perf_counter_ns()
            records.append(KRecord(k=k, labeling=z, log_score=None,
                                   penalty=None, penalized=None,
                                   detection_ns=t1 - t0, criterion_ns=t2 - t1,
                                   error=f"criterion failed: {exc}"))

    k_hat = 0
    best = -float("inf")
    for rec in records:
        if rec.error is None and rec.penalized is not None and rec.penalized > best:
            k_hat, best = rec.k, rec.penalized
    if k_hat == 0:
        raise RuntimeError("every candidate k failed; see per-k errors")
    detection_ns = eig_ns + sum(r.detection_ns for r in records)
    criterion_ns = sum(r.criterion_ns for r in records)
    return SelectionResult(method=method, k_max=k_max, records=tuple(records),
                           k_hat=k_hat, detection_ns=detection_ns,
                           criterion_ns=criterion_ns, config=penalty)
