"""Single-sweep postprocessing that makes an arbitrary partition feasible.

Turns the output of an external general-purpose partitioner (or an invalid
naive baseline) into a partition satisfying the charge, gap, and size
constraints. Violating nodes move to the allowed fragment they are most
strongly connected to; when no fragment can take them, a new singleton
fragment opens, so the result may have more fragments than requested.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Partition, PartitionConstraints, ProteinGraph


@dataclass
class CutWeightTable:
    """Per-node connection weight into each fragment.

    rows[v][f] is the total weight of edges from v to nodes currently in
    fragment f; row sums equal weighted degrees.
    """

    rows: list[list[float]]
    fragment_count: int

    def add_fragment(self) -> int:
        for row in self.rows:
            row.append(0.0)
        self.fragment_count += 1
        return self.fragment_count - 1

    def apply_move(self, g: ProteinGraph, v: int, source: int, target: int) -> None:
        for u, w in g.adjacency[v]:
            row = self.rows[u]
            row[source] -= w
            row[target] += w


def build_cut_weight_table(g: ProteinGraph, p: Partition) -> CutWeightTable:
    """Connection weights of every node into every fragment of p."""
    assignment = p.assignment
    rows = [[0.0] * p.fragment_count for _ in range(g.node_count)]
    for u, v, w in g.edges:
        rows[u][assignment[v]] += w
        rows[v][assignment[u]] += w
    return CutWeightTable(rows=rows, fragment_count=p.fragment_count)


def move_respects_gap(assignment: list[int], n: int, v: int, target: int) -> bool:
    """Whether assignment with v placed in ``target`` has no distance-2 gap
    among the patterns that involve v (positions v-2 .. v+2)."""
    for x in (v - 2, v - 1, v):
        if x < 0 or x + 2 >= n:
            continue
        a = target if x == v else assignment[x]
        b = target if x + 1 == v else assignment[x + 1]
        d = target if x + 2 == v else assignment[x + 2]
        if a == d and b != a:
            return False
    return True


def repair_partition(
    g: ProteinGraph, p: Partition, c: PartitionConstraints
) -> Partition:
    """One forward sweep that fixes charge, gap, and size violations.

    A node must leave its fragment when the fragment already holds a settled
    charge conflicting with it, already holds max_size settled nodes, or the
    node sits in a distance-2 gap pattern of the current assignment. Counters
    track settled (already swept or moved-in) nodes only, so nodes that will
    be swept later do not block a move. Emptied fragments are dropped and ids
    renumbered densely by first appearance.
    """
    n = g.node_count
    assignment = list(p.assignment)
    table = build_cut_weight_table(g, p)
    rows = table.rows
    settled = [0] * table.fragment_count
    settled_charges = [0] * table.fragment_count

    for v in range(n):
        f = assignment[v]
        v_charged = g.charged[v]
        must_move = (
            (c.enforce_charge and v_charged and settled_charges[f] >= 1)
            or settled[f] >= c.max_size
            or (c.enforce_gap and not move_respects_gap(assignment, n, v, f))
        )
        if must_move:
            best_target = -1
            best_weight = -1.0
            row = rows[v]
            for t in range(table.fragment_count):
                if t == f:
                    continue
                if settled[t] >= c.max_size:
                    continue
                if c.enforce_charge and v_charged and settled_charges[t] >= 1:
                    continue
                if c.enforce_gap and not move_respects_gap(assignment, n, v, t):
                    continue
                if row[t] > best_weight:
                    best_weight = row[t]
                    best_target = t
            if best_target < 0:
                best_target = table.add_fragment()
                settled.append(0)
                settled_charges.append(0)
            table.apply_move(g, v, f, best_target)
            assignment[v] = best_target
            f = best_target
        settled[f] += 1
        if v_charged:
            settled_charges[f] += 1

    return Partition.from_sparse_assignment(assignment, g.charged)
