"""Greedy agglomerative partitioner.

Kruskal-style: start from singletons, walk the edges by descending weight,
and merge the two endpoint fragments whenever the merged fragment would still
satisfy the size, charge, and gap constraints. Stops once the target fragment
count is reached or the edges run out (possibly leaving more fragments than
requested; callers inspect fragment_count).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Partition, PartitionConstraints, ProteinGraph


@dataclass
class MergeState:
    """Disjoint fragments with sorted member lists and charge bookkeeping."""

    parent: list[int]
    members: dict[int, list[int]]
    charge_count: dict[int, int]
    fragment_count: int
    edges: list[tuple[int, int, float]] = field(default_factory=list)

    @classmethod
    def singletons(cls, g: ProteinGraph) -> "MergeState":
        n = g.node_count
        return cls(
            parent=list(range(n)),
            members={v: [v] for v in range(n)},
            charge_count={v: 1 if g.charged[v] else 0 for v in range(n)},
            fragment_count=n,
            edges=sorted(g.edges, key=lambda e: (-e[2], e[0], e[1])),
        )

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:  # path compression
            self.parent[v], v = root, self.parent[v]
        return root

    def merge(self, fa: int, fb: int) -> int:
        """Union by size; returns the surviving root."""
        if len(self.members[fa]) < len(self.members[fb]):
            fa, fb = fb, fa
        self.parent[fb] = fa
        self.members[fa] = _merge_sorted(self.members[fa], self.members[fb])
        del self.members[fb]
        self.charge_count[fa] += self.charge_count.pop(fb)
        self.fragment_count -= 1
        return fa

    def to_partition(self, g: ProteinGraph) -> Partition:
        assignment = [self.find(v) for v in range(g.node_count)]
        return Partition.from_sparse_assignment(assignment, g.charged)


def _merge_sorted(a: list[int], b: list[int]) -> list[int]:
    out: list[int] = []
    ia = ib = 0
    while ia < len(a) and ib < len(b):
        if a[ia] < b[ib]:
            out.append(a[ia])
            ia += 1
        else:
            out.append(b[ib])
            ib += 1
    out.extend(a[ia:])
    out.extend(b[ib:])
    return out


def can_merge(
    state: MergeState, fa: int, fb: int, c: PartitionConstraints
) -> bool:
    """Whether fragments fa and fb may merge without violating constraints.

    Rejects when both fragments hold a charge, when the merged size exceeds
    max_size, or when the merged member set has a distance-2 gap (ids x and
    x+2 present without x+1).
    """
    if fa == fb:
        raise ValueError("cannot merge a fragment with itself")
    if c.enforce_charge and state.charge_count[fa] >= 1 and state.charge_count[fb] >= 1:
        return False
    ma = state.members[fa]
    mb = state.members[fb]
    if len(ma) + len(mb) > c.max_size:
        return False
    if c.enforce_gap:
        merged = _merge_sorted(ma, mb)
        for idx in range(len(merged) - 1):
            if merged[idx + 1] - merged[idx] == 2:
                return False
    return True


def greedy_partition(g: ProteinGraph, c: PartitionConstraints) -> Partition:
    """Merge fragments along the heaviest edges until k fragments remain.

    Equal-weight edges are processed by ascending (min endpoint, max endpoint).
    The result always satisfies size, charge, and gap; the fragment count may
    exceed k when no further merge is allowed.
    """
    state = MergeState.singletons(g)
    for u, v, _w in state.edges:
        if state.fragment_count <= c.k:
            break
        fa = state.find(u)
        fb = state.find(v)
        if fa == fb:
            continue
        if can_merge(state, fa, fb, c):
            state.merge(fa, fb)
    return state.to_partition(g)
