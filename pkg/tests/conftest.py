import random

import pytest

from protpart import PartitionConstraints, ProteinGraph


def random_graph(rng: random.Random, n: int, complete: bool = False, charged=()):
    """Connected random graph with a backbone; deterministic per rng state."""
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if complete or v == u + 1 or rng.random() < 0.4:
                edges.append((u, v, round(rng.uniform(0.1, 5.0), 3)))
    return ProteinGraph.from_edges(n, edges, charged)


def random_charges(rng: random.Random, n: int, count: int):
    return rng.sample(range(n), count)


@pytest.fixture
def path6():
    """Six-node path with weights 3,1,3,1,3 along the chain."""
    return ProteinGraph.from_edges(
        6, [(0, 1, 3.0), (1, 2, 1.0), (2, 3, 3.0), (3, 4, 1.0), (4, 5, 3.0)]
    )


@pytest.fixture
def path4():
    """Four-node unit path."""
    return ProteinGraph.from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)])


def constraints(n, k, epsilon=0.0, **kwargs):
    return PartitionConstraints.create(n, k, epsilon, **kwargs)
