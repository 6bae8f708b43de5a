"""Brute-force oracle self-consistency on tiny instances."""

from __future__ import annotations

import math

import pytest

from sbmselect import Labeling
from sbmselect.oracle import (
    TinyInstanceBound,
    brute_c_dnml_A,
    brute_c_mn,
    brute_c_nmcl,
    brute_dnml_normalization,
    iter_graphs,
    iter_labelings,
)


def test_bound_rejects_large_instances():
    bound = TinyInstanceBound()
    with pytest.raises(ValueError):
        bound.check(5, 1)
    with pytest.raises(ValueError):
        bound.check(3, 4)
    with pytest.raises(ValueError):
        TinyInstanceBound(max_nodes=5)
    with pytest.raises(ValueError):
        TinyInstanceBound(max_k=4)


def test_enumeration_sizes():
    assert sum(1 for _ in iter_graphs(4)) == 64
    assert sum(1 for _ in iter_labelings(4, 3)) == 81
    assert sum(1 for _ in iter_graphs(1)) == 1


def test_brute_c_mn_values():
    assert brute_c_mn(2, 3) == pytest.approx(4.5, rel=1e-12)
    for m in range(5):
        assert brute_c_mn(m, 1) == pytest.approx(1.0, rel=1e-12)
    for Q in range(1, 5):
        assert brute_c_mn(0, Q) == pytest.approx(1.0, rel=1e-12)


def test_brute_c_mn_guard():
    with pytest.raises(ValueError):
        brute_c_mn(9, 2)
    with pytest.raises(ValueError):
        brute_c_mn(3, 5)
    with pytest.raises(ValueError):
        brute_c_mn(3, 0)


def test_brute_graph_complexity_single_block_is_c_mn():
    z = Labeling.all_in_one(3)
    assert brute_c_dnml_A(z, 3) == pytest.approx(26 / 9, rel=1e-12)


def test_brute_graph_complexity_single_cross_pair():
    z = Labeling(k=2, assignment=[0, 1])
    assert brute_c_dnml_A(z, 2) == pytest.approx(2.0, rel=1e-12)


def test_brute_graph_complexity_guard():
    with pytest.raises(ValueError):
        brute_c_dnml_A(Labeling.all_in_one(5), 5)
    with pytest.raises(ValueError):
        brute_c_dnml_A(Labeling.all_in_one(3), 4)  # length mismatch


def test_normalization_smallest_case():
    assert brute_dnml_normalization(3, 1) == pytest.approx(1.0, abs=1e-10)


def test_nmcl_two_node_value():
    # Two graphs on two nodes; the saturated fit has likelihood 1 each.
    assert brute_c_nmcl(2, 1) == pytest.approx(2.0, rel=1e-12)


def test_nmcl_reduces_to_graph_complexity_at_k1():
    for n in (2, 3, 4):
        z = Labeling.all_in_one(n)
        assert brute_c_nmcl(n, 1) == pytest.approx(brute_c_dnml_A(z, n), rel=1e-12)


def test_nmcl_guard():
    with pytest.raises(ValueError):
        brute_c_nmcl(5, 2)


def test_log_oracles_are_nonnegative_spot():
    assert math.log(brute_c_nmcl(3, 2)) >= 0.0
    assert math.log(brute_c_dnml_A(Labeling(k=2, assignment=[0, 1, 0]), 3)) >= 0.0
