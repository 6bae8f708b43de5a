"""Acceptance gate: one test per numbered criterion.

Each test prints a single ``[acceptance] criterion NN PASS|FAIL|SKIP``
line on the real terminal (capture suspended around the print) so the
gate summary is always visible in the run log.  Tolerances and instance
grids follow the package contract; the heavier Monte Carlo checks pin
their seeds so the observed outcomes are reproducible.
"""

from __future__ import annotations

import math
import sys
import time
from contextlib import contextmanager

import pytest

from sbmselect import (
    DetectorConfig,
    block_stats,
    load_edge_list,
    log_multinomial_complexity,
    pen_dnml,
    pen_nml,
    planted_partition,
    sample_sbm,
    select_k,
)
from sbmselect.criteria import (
    clear_complexity_cache,
    log_integrated_graph_lik,
    log_integrated_label_lik,
)
from sbmselect.oracle import (
    brute_c_dnml_A,
    brute_c_mn,
    brute_c_nmcl,
    brute_dnml_normalization,
    iter_graphs,
    iter_labelings,
)
from sbmselect.sampler import derive_seed

from conftest import clique_pair_graph, empty_graph, external_dataset

_DETECTOR_SEED_OFFSET = 0x5EEDD15C


@pytest.fixture
def criterion(capsys):
    """Context manager printing the per-criterion verdict on the real
    terminal, with capture suspended so the line survives a quiet run."""

    def _emit(line: str) -> None:
        with capsys.disabled():
            print(line, flush=True)

    @contextmanager
    def _criterion(num: int, title: str):
        try:
            yield
        except BaseException as exc:
            verdict = "SKIP" if type(exc).__name__ == "Skipped" else "FAIL"
            _emit(f"[acceptance] criterion {num:2d} {verdict} {title}")
            raise
        _emit(f"[acceptance] criterion {num:2d} PASS {title}")

    return _criterion


def _run_replications(params, n: int, base_seed: int, R: int = 20) -> list[int]:
    hats = []
    for r in range(R):
        seed = derive_seed(base_seed, r)
        g, _ = sample_sbm(params, n, seed)
        det = DetectorConfig(seed=derive_seed(seed, _DETECTOR_SEED_OFFSET))
        hats.append(select_k(g, k_max=10, method="dnml", detector=det).k_hat)
    return hats


def test_criterion_01_complexity_matches_enumeration(criterion):
    with criterion(1, "stochastic complexity matches enumeration (m<=6, Q<=4)"):
        t0 = time.perf_counter()
        for m in range(7):
            for Q in range(1, 5):
                fast = math.exp(log_multinomial_complexity(m, Q))
                brute = brute_c_mn(m, Q)
                assert abs(fast - brute) <= 1e-10 * brute, (m, Q)
        assert time.perf_counter() - t0 < 1.0


def test_criterion_02_graph_complexity_factorizes(criterion):
    with criterion(2, "graph complexity = product of per-pair complexities"):
        for n in range(1, 5):
            for k in range(1, 4):
                for z in iter_labelings(n, k):
                    brute = brute_c_dnml_A(z, n)
                    stats = block_stats(empty_graph(n), z)
                    product = 1.0
                    for a in range(k):
                        for b in range(a, k):
                            m = int(stats.n_ab[a, b])
                            product *= math.exp(log_multinomial_complexity(m, 2))
                    assert abs(brute - product) <= 1e-10 * product, (n, k, z)


def test_criterion_03_dnml_normalizes_to_one(criterion):
    with criterion(3, "DNML sums to 1 over all (labeling, graph) pairs"):
        for n, k in ((3, 1), (3, 2), (4, 2)):
            total = brute_dnml_normalization(n, k)
            assert abs(total - 1.0) <= 1e-8, (n, k, total)


def test_criterion_04_integrated_likelihoods_normalize(criterion):
    with criterion(4, "integrated likelihoods are probability distributions"):
        for n in range(1, 5):
            for k in range(1, 4):
                for z in iter_labelings(n, k):
                    total = sum(
                        math.exp(log_integrated_graph_lik(block_stats(g, z)))
                        for g in iter_graphs(n))
                    assert abs(total - 1.0) <= 1e-10, ("graph side", n, k)
        empty = {n: empty_graph(n) for n in range(1, 5)}
        for n in range(1, 5):
            for k in range(1, 3):
                total = sum(
                    math.exp(log_integrated_label_lik(block_stats(empty[n], z)))
                    for z in iter_labelings(n, k))
                assert abs(total - 1.0) <= 1e-10, ("label side", n, k)


def test_criterion_05_penalty_closed_forms(criterion):
    with criterion(5, "penalty closed forms and their difference identity"):
        def pen_sum_form(k: int, n: int, eps: float) -> float:
            coeff = sum((i * (i + 2) + 1 + eps) / 2.0 for i in range(1, k))
            return coeff * math.log(n) + n * sum(math.log(i) for i in range(1, k))

        for k in range(1, 11):
            for n in (10, 1000):
                closed = pen_dnml(k, n, 0.5)
                summed = pen_sum_form(k, n, 0.5)
                assert math.isclose(closed, summed, rel_tol=1e-12, abs_tol=1e-12)
        for n in (2, 10, 1000):
            assert pen_dnml(1, n, 0.5) == 0.0
        for k in range(1, 11):
            for n in (10, 1000, 10_000):
                gap = pen_dnml(k, n, 0.5) - pen_nml(k, n, 0.5)
                assert math.isclose(gap, n * math.lgamma(k),
                                    rel_tol=1e-12, abs_tol=1e-9)


def test_criterion_06_planted_structure_selection(criterion):
    with criterion(6, "two 10-cliques select k=2; empty graph selects k=1"):
        res = select_k(clique_pair_graph(10), k_max=5,
                       detector=DetectorConfig(seed=0))
        assert res.k_hat == 2
        res = select_k(empty_graph(10), k_max=5, detector=DetectorConfig(seed=0))
        assert res.k_hat == 1


def test_criterion_07_balanced_recovery_at_scale(criterion):
    with criterion(7, "balanced SBM: k=5 recovered at n=350, underestimated at n=100"):
        t0 = time.perf_counter()
        params = planted_partition(5, 0.8, 0.3)
        hats_350 = _run_replications(params, 350, 20260823)
        share = sum(1 for k in hats_350 if k == 5) / len(hats_350)
        assert share >= 0.80, hats_350
        hats_100 = _run_replications(params, 100, 20260824)
        assert sum(hats_100) / len(hats_100) < 5.0, hats_100
        assert time.perf_counter() - t0 < 300.0


def test_criterion_08_unbalanced_sweep_direction(criterion):
    with criterion(8, "unbalanced sweep: mean estimate non-increasing in b"):
        pi = (0.6, 0.1, 0.1, 0.1, 0.1)
        means = []
        for b in (0.3, 0.4, 0.5):
            params = planted_partition(5, 0.8, b, pi)
            hats = _run_replications(params, 200, 777000 + int(b * 10))
            means.append(sum(hats) / len(hats))
        assert all(means[i] >= means[i + 1] for i in range(len(means) - 1)), means


def _estimate_file(path, **kwargs) -> int:
    g = load_edge_list(path)
    return select_k(g, detector=DetectorConfig(seed=0), **kwargs).k_hat


def test_criterion_09_karate(criterion, karate_path):
    with criterion(9, "real data: karate club selects k=1"):
        assert _estimate_file(karate_path) == 1


def test_criterion_09_dolphins(criterion):
    with criterion(9, "real data: dolphins selects k=2"):
        assert _estimate_file(external_dataset("dolphins.txt")) == 2


@pytest.mark.parametrize("name,target", [
    ("polbooks.txt", 2), ("football.txt", 3)])
def test_criterion_09_sensitivity_tolerant(criterion, name, target):
    with criterion(9, f"real data: {name} within 1 of {target}"):
        assert abs(_estimate_file(external_dataset(name)) - target) <= 1


def test_criterion_09_blogs(criterion):
    with criterion(9, "real data: political blogs within 1 of 2, under 10 min"):
        path = external_dataset("polblogs.txt")
        t0 = time.perf_counter()
        k_hat = _estimate_file(path)
        assert time.perf_counter() - t0 < 600.0
        assert abs(k_hat - 2) <= 1


def test_criterion_10_criterion_phase_runtime(criterion):
    with criterion(10, "criterion phase under 1 s at n=200, doubling ratio <= 5"):
        params = planted_partition(5, 0.8, 0.3)
        best: dict[int, int] = {}
        for n in (200, 400, 800):
            g, _ = sample_sbm(params, n, derive_seed(424242, n))
            for _ in range(5):
                clear_complexity_cache()
                res = select_k(g, k_max=10, method="dnml",
                               detector=DetectorConfig(seed=1))
                best[n] = min(best.get(n, sys.maxsize), res.criterion_ns)
        assert best[200] < 1e9, best
        assert best[400] / best[200] <= 5.0, best
        assert best[800] / best[400] <= 5.0, best


def test_criterion_11_normalizer_lower_bounds_and_growth(criterion):
    with criterion(11, "normalizer logs nonnegative; complete-likelihood growth bound"):
        for n in range(1, 5):
            for k in range(1, 4):
                for z in iter_labelings(n, k):
                    assert math.log(brute_c_dnml_A(z, n)) >= 0.0
        for n in range(1, 5):
            for k in range(1, 3):
                value = math.log(brute_c_nmcl(n, k))
                assert value >= 0.0
                bound = (k * (k + 2) - 1) / 2.0 * math.log(n) + 20.0
                assert value <= bound, (n, k, value, bound)
