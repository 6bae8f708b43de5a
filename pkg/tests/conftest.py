"""Shared fixtures and graph builders for the test suite."""

from __future__ import annotations

import itertools
import os
from pathlib import Path

import numpy as np
import pytest

from sbmselect import Graph

DATA_DIR = Path(__file__).parent / "data"


def clique_pair_graph(size: int = 10) -> Graph:
    """Two disjoint complete graphs of the given size."""
    edges = list(itertools.combinations(range(size), 2))
    edges += [(u + size, v + size) for u, v in itertools.combinations(range(size), 2)]
    return Graph.from_edges(2 * size, edges)


def empty_graph(n: int) -> Graph:
    return Graph(n, np.empty((0, 2), dtype=np.int64))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def triangle() -> Graph:
    return Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def karate_path() -> Path:
    return DATA_DIR / "karate.txt"


def external_dataset(name: str) -> Path:
    """Path to an optional benchmark edge list, skipping when unavailable.

    Set SBMSELECT_DATA_DIR to a directory holding 1-indexed edge lists
    (dolphins.txt, polbooks.txt, football.txt, polblogs.txt); see the
    README for conversion pointers.
    """
    root = os.environ.get("SBMSELECT_DATA_DIR")
    if not root:
        pytest.skip(f"SBMSELECT_DATA_DIR not set; {name} dataset unavailable")
    path = Path(root) / name
    if not path.exists():
        pytest.skip(f"{path} not found")
    return path
