"""Optimal main-chain partitioning by dynamic programming.

Fragments are forced to be contiguous node-id intervals, so a k-partition is
a choice of k-1 delimiter nodes. part_cut[i][j] is the minimum cut weight of
any continuous (j+1)-fragment partition of nodes [0, i] that satisfies the
size and charge constraints; filling the table column by column and following
predecessors reconstructs the optimum. Gap and continuity hold automatically
for intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import InfeasibleError, Partition, PartitionConstraints, ProteinGraph

INFINITE = math.inf


@dataclass
class CutColumn:
    """Cut cost of appending fragment [l+1, i] for each candidate delimiter l.

    ``values[l - start]`` is the total weight of edges between [0, l] and
    [l+1, i].
    """

    start: int
    values: list[float]

    def __getitem__(self, l: int) -> float:
        return self.values[l - self.start]


@dataclass
class DPTables:
    """Filled programming tables, kept for inspection and tests."""

    part_cut: list[list[float]]
    pred: list[list[int]]
    window_start: list[int]


def compute_window_start(g: ProteinGraph, i: int, max_size: int) -> int:
    """Smallest admissible predecessor delimiter l for a fragment ending at i.

    The fragment [l+1, i] may hold at most max_size nodes and at most one
    charged node. Scanning backwards from i, the second charged node found
    caps how far the fragment may reach: it may start just past that node.
    """
    n = g.node_count
    if not 0 <= i < n:
        raise ValueError(f"node {i} out of range")
    lo = max(i - max_size, 0)
    charges_seen = 0
    for v in range(i, lo - 1, -1):
        if g.charged[v]:
            charges_seen += 1
            if charges_seen == 2:
                return v
    return lo


def compute_cut_column(g: ProteinGraph, i: int, l_min: int) -> CutColumn:
    """Cut costs c[l] for l in [l_min, i-1] via the reverse running sum.

    c[i-1] counts edges from [0, i-1] into node i; stepping l downwards pulls
    node l+1 into the fragment, adding its edges to the remaining prefix and
    removing its edges into the fragment body.
    """
    if l_min > i - 1:
        raise ValueError(f"empty predecessor window: l_min={l_min}, i={i}")
    adj = g.adjacency
    values = [0.0] * (i - l_min)
    acc = 0.0
    for u, w in adj[i]:
        if u < i:
            acc += w
    values[i - 1 - l_min] = acc
    for l in range(i - 2, l_min - 1, -1):
        moved = l + 1  # node crossing from prefix into the fragment
        for x, w in adj[moved]:
            if x <= l:
                acc += w
            elif x <= i:
                acc -= w
        values[l - l_min] = acc
    return CutColumn(start=l_min, values=values)


def dp_tables(g: ProteinGraph, c: PartitionConstraints) -> DPTables:
    """Fill the part_cut/pred tables for the whole instance."""
    n = g.node_count
    k = c.k
    max_sz = c.max_size

    part_cut = [[INFINITE] * k for _ in range(n)]
    pred = [[-1] * k for _ in range(n)]
    window = [0] * n

    # One-fragment prefixes: zero cut while within size and charge limits.
    charges = 0
    for i in range(min(max_sz, n)):
        if g.charged[i]:
            charges += 1
            if charges == 2:
                break
        part_cut[i][0] = 0.0

    for i in range(n):
        l_min = compute_window_start(g, i, max_sz)
        window[i] = l_min
        if i == 0:
            continue
        column = compute_cut_column(g, i, l_min)
        col_values = column.values
        row_i = part_cut[i]
        pred_i = pred[i]
        for j in range(1, k):
            best = INFINITE
            best_l = -1
            for l in range(l_min, i):
                prev = part_cut[l][j - 1]
                if prev == INFINITE:
                    continue
                cand = prev + col_values[l - l_min]
                if cand < best:
                    best = cand
                    best_l = l
            row_i[j] = best
            pred_i[j] = best_l

    return DPTables(part_cut=part_cut, pred=pred, window_start=window)


def dp_partition(g: ProteinGraph, c: PartitionConstraints) -> Partition:
    """Minimum-cut continuous k-partition under size and charge constraints.

    Raises InfeasibleError when no such partition exists (too many charges,
    k > n, or sizes cannot fit under max_size).
    """
    n = g.node_count
    k = c.k
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > n:
        raise InfeasibleError(f"k={k} exceeds node count {n}")

    tables = dp_tables(g, c)
    if tables.part_cut[n - 1][k - 1] == INFINITE:
        raise InfeasibleError(
            f"no continuous partition for n={n}, k={k}, epsilon={c.epsilon}, "
            f"charged={[v for v in range(n) if g.charged[v]]}"
        )

    assignment = [0] * n
    i = n - 1
    for j in range(k - 1, 0, -1):
        l = tables.pred[i][j]
        for v in range(l + 1, i + 1):
            assignment[v] = j
        i = l
    # nodes [0, i] stay in fragment 0
    return Partition.from_assignment(assignment, g.charged)
