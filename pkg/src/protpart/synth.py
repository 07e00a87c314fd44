"""Synthetic protein-like instances and charge sampling.

Generated graphs are complete, with heavy backbone edges between chain
neighbors, long-range weights decaying with chain distance, and a few strong
secondary-structure contacts. They stand in for real protein weight matrices,
which are external data.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .dp import dp_partition
from .graph import InfeasibleError, PartitionConstraints, ProteinGraph

MAX_CHARGE_SAMPLE_TRIES = 1000


@dataclass(frozen=True)
class SynthParams:
    backbone_low: float = 2.0
    backbone_high: float = 4.0
    base: float = 1.0
    decay: float = 1.5
    noise_low: float = 0.5
    noise_high: float = 1.5
    contact_fraction: float = 0.1  # strong contacts per node
    contact_low: float = 1.5
    contact_high: float = 3.0


def synth_protein(
    n: int, seed: int, params: Optional[SynthParams] = None
) -> ProteinGraph:
    """Complete weighted graph on n chain-ordered nodes, deterministic per seed."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    p = params or SynthParams()
    rng = random.Random(seed)
    weights: dict[tuple[int, int], float] = {}
    for i in range(n):
        for j in range(i + 1, n):
            d = j - i
            if d == 1:
                weights[(i, j)] = rng.uniform(p.backbone_low, p.backbone_high)
            else:
                noise = rng.uniform(p.noise_low, p.noise_high)
                weights[(i, j)] = p.base * noise / (d ** p.decay)
    contacts = max(1, int(p.contact_fraction * n)) if n >= 4 else 0
    for _ in range(contacts):
        i = rng.randrange(0, n - 3)
        j = rng.randrange(i + 3, n)
        weights[(i, j)] += rng.uniform(p.contact_low, p.contact_high)
    edges = [(u, v, w) for (u, v), w in weights.items()]
    return ProteinGraph.from_edges(n, edges)


def sample_charges(
    g: ProteinGraph,
    k: int,
    epsilon: float,
    rng: random.Random,
    candidates: Optional[Sequence[int]] = None,
    fraction: float = 0.8,
    max_tries: int = MAX_CHARGE_SAMPLE_TRIES,
) -> list[int]:
    """Sample floor(fraction*k) charged nodes admitting a feasible main-chain cut.

    Candidates default to all nodes when no potentially-charged list is given.
    Rejection-samples until dp_partition accepts the charge set; raises
    InfeasibleError after ``max_tries`` rejections.
    """
    pool = sorted(candidates) if candidates is not None else list(range(g.node_count))
    count = int(math.floor(fraction * k))
    if count == 0:
        return []
    if count > len(pool):
        raise InfeasibleError(
            f"cannot sample {count} charged nodes from {len(pool)} candidates"
        )
    constraints = PartitionConstraints.create(g.node_count, k, epsilon)
    for _ in range(max_tries):
        chosen = sorted(rng.sample(pool, count))
        charged_graph = g.with_charges(chosen)
        try:
            dp_partition(charged_graph, constraints)
        except InfeasibleError:
            continue
        return chosen
    raise InfeasibleError(
        f"no feasible charge sample found after {max_tries} tries (k={k})"
    )
