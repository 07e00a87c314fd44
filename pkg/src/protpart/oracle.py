"""Exhaustive reference solvers for small instances.

Both solvers enumerate the full search space and are used to validate the
fast algorithms. They refuse instances beyond a hard size guard instead of
sampling: a reference that samples is not a reference.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Optional

from .graph import InfeasibleError, Partition, PartitionConstraints, ProteinGraph

MAINCHAIN_PLACEMENT_LIMIT = 10**7
GENERAL_NODE_LIMIT = 12


def exact_mainchain(g: ProteinGraph, c: PartitionConstraints) -> Partition:
    """Minimum-cut continuous k-partition by trying every delimiter placement.

    A placement is k-1 delimiter nodes; the delimiter is the last node of its
    fragment. Ties resolve to the lexicographically smallest delimiter vector.
    Raises InfeasibleError if no placement satisfies the size and charge
    constraints, ValueError if the search space exceeds the guard.
    """
    n = g.node_count
    k = c.k
    if k > n:
        raise InfeasibleError(f"k={k} exceeds node count {n}")
    space = math.comb(n - 1, k - 1)
    if space > MAINCHAIN_PLACEMENT_LIMIT:
        raise ValueError(
            f"refusing to enumerate {space} delimiter placements "
            f"(limit {MAINCHAIN_PLACEMENT_LIMIT})"
        )

    charge_prefix = [0] * (n + 1)
    for v in range(n):
        charge_prefix[v + 1] = charge_prefix[v] + (1 if g.charged[v] else 0)

    def fragment_ok(start: int, end: int) -> bool:
        # fragment = nodes [start, end]
        if end - start + 1 > c.max_size:
            return False
        if c.enforce_charge and charge_prefix[end + 1] - charge_prefix[start] > 1:
            return False
        return True

    best_cut: Optional[float] = None
    best_delims: Optional[tuple[int, ...]] = None
    for delims in combinations(range(n - 1), k - 1):
        bounds = (-1,) + delims + (n - 1,)
        if any(
            not fragment_ok(bounds[i] + 1, bounds[i + 1])
            for i in range(k)
        ):
            continue
        assignment = [0] * n
        frag = 0
        for v in range(n):
            assignment[v] = frag
            if frag < k - 1 and v == delims[frag]:
                frag += 1
        cut = 0.0
        for u, v, w in g.edges:
            if assignment[u] != assignment[v]:
                cut += w
        if best_cut is None or cut < best_cut:
            best_cut = cut
            best_delims = delims

    if best_delims is None:
        raise InfeasibleError(
            f"no continuous {k}-partition with max_size={c.max_size} exists"
        )
    assignment = [0] * n
    frag = 0
    for v in range(n):
        assignment[v] = frag
        if frag < k - 1 and v == best_delims[frag]:
            frag += 1
    return Partition.from_assignment(assignment, g.charged)


def exact_general(g: ProteinGraph, c: PartitionConstraints) -> Partition:
    """Minimum-cut general k-partition by enumerating set partitions.

    Enumerates restricted growth strings (canonical labelings, so fragment
    relabelings are not counted twice) with exactly k fragments, pruning on
    size, charge, gap, and a running cut bound. Guarded to n <= 12.
    """
    n = g.node_count
    k = c.k
    if n > GENERAL_NODE_LIMIT:
        raise ValueError(
            f"refusing exhaustive general search for n={n} (limit {GENERAL_NODE_LIMIT})"
        )
    if k > n:
        raise InfeasibleError(f"k={k} exceeds node count {n}")

    adj = g.adjacency
    max_sz = c.max_size
    charged = g.charged
    assignment = [0] * n
    sizes = [0] * n
    charges = [0] * n

    best_cut: Optional[float] = None
    best_assignment: Optional[list[int]] = None

    def recurse(v: int, used: int, partial_cut: float) -> None:
        nonlocal best_cut, best_assignment
        if best_cut is not None and partial_cut >= best_cut:
            return
        if used + (n - v) < k:
            return  # not enough nodes left to open k fragments
        if v == n:
            if used == k:
                best_cut = partial_cut
                best_assignment = assignment.copy()
            return
        limit = min(used + 1, k)
        for label in range(limit):
            if sizes[label] + 1 > max_sz:
                continue
            if c.enforce_charge and charged[v] and charges[label] >= 1:
                continue
            if c.enforce_gap and v >= 2:
                # pattern (v-2, v-1, v) is finalized once v gets a label
                if assignment[v - 2] == label and assignment[v - 1] != label:
                    continue
            added = 0.0
            for u, w in adj[v]:
                if u < v and assignment[u] != label:
                    added += w
            assignment[v] = label
            sizes[label] += 1
            if charged[v]:
                charges[label] += 1
            recurse(v + 1, max(used, label + 1), partial_cut + added)
            sizes[label] -= 1
            if charged[v]:
                charges[label] -= 1

    recurse(0, 0, 0.0)
    if best_assignment is None:
        raise InfeasibleError(
            f"no {k}-partition with max_size={c.max_size} satisfies the constraints"
        )
    return Partition.from_assignment(best_assignment, g.charged)
