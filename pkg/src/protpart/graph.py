"""Core data model: protein graphs, partitions, constraints, and the naive baseline.

Nodes are numbered 0..n-1 along the protein main chain, so node order carries
the backbone structure. All other modules build on the types defined here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

UNASSIGNED = -1

# Per-fragment DFT cost fit (seconds) for a fragment of s amino acids.
DFT_QUADRATIC = 1.15
DFT_LINEAR = 3.63
DFT_CONSTANT = 1.44


class InfeasibleError(Exception):
    """No partition satisfying the active constraints exists for this instance."""


class GraphFormatError(ValueError):
    """Malformed or inconsistent graph/charges/partition input."""


@dataclass(frozen=True)
class ProteinGraph:
    """Immutable weighted undirected graph with per-node charge flags.

    ``edges`` holds each undirected edge once as (u, v, w) with u < v and w > 0.
    ``adjacency[v]`` lists (neighbor, weight) pairs, symmetric by construction.
    """

    node_count: int
    edges: tuple[tuple[int, int, float], ...]
    charged: tuple[bool, ...]
    adjacency: tuple[tuple[tuple[int, float], ...], ...]

    @classmethod
    def from_edges(
        cls,
        node_count: int,
        edges: Iterable[tuple[int, int, float]],
        charged: Optional[Sequence[int]] = None,
    ) -> "ProteinGraph":
        """Build a validated graph from an edge list.

        ``charged`` is an iterable of charged node ids. Raises GraphFormatError
        on self-loops, duplicate pairs, out-of-range ids, or non-positive weights.
        """
        if node_count < 1:
            raise GraphFormatError(f"node_count must be >= 1, got {node_count}")
        seen: set[tuple[int, int]] = set()
        normalized: list[tuple[int, int, float]] = []
        for u, v, w in edges:
            if u == v:
                raise GraphFormatError(f"self-loop at node {u}")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise GraphFormatError(f"edge ({u},{v}) out of range for n={node_count}")
            if w <= 0:
                raise GraphFormatError(f"edge ({u},{v}) has non-positive weight {w}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"duplicate edge ({key[0]},{key[1]})")
            seen.add(key)
            normalized.append((key[0], key[1], float(w)))
        normalized.sort()

        flags = [False] * node_count
        for c in charged or ():
            if not (0 <= c < node_count):
                raise GraphFormatError(f"charged node {c} out of range for n={node_count}")
            flags[c] = True

        adj: list[list[tuple[int, float]]] = [[] for _ in range(node_count)]
        for u, v, w in normalized:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return cls(
            node_count=node_count,
            edges=tuple(normalized),
            charged=tuple(flags),
            adjacency=tuple(tuple(a) for a in adj),
        )

    def with_charges(self, charged_nodes: Iterable[int]) -> "ProteinGraph":
        """Same topology and weights, different charge flags."""
        flags = [False] * self.node_count
        for c in charged_nodes:
            if not (0 <= c < self.node_count):
                raise GraphFormatError(f"charged node {c} out of range")
            flags[c] = True
        return ProteinGraph(self.node_count, self.edges, tuple(flags), self.adjacency)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def total_edge_weight(self) -> float:
        return sum(w for _, _, w in self.edges)

    def charged_nodes(self) -> list[int]:
        return [v for v, f in enumerate(self.charged) if f]


@dataclass(frozen=True)
class PartitionConstraints:
    """Target fragment count, imbalance, and the active constraint set."""

    k: int
    epsilon: float
    max_size: int
    enforce_continuity: bool = False
    enforce_charge: bool = True
    enforce_gap: bool = True

    @classmethod
    def create(
        cls,
        n: int,
        k: int,
        epsilon: float = 0.0,
        enforce_continuity: bool = False,
        enforce_charge: bool = True,
        enforce_gap: bool = True,
    ) -> "PartitionConstraints":
        if k < 2:
            raise ValueError(f"fragment count k must be >= 2, got {k}")
        if epsilon < 0:
            raise ValueError(f"imbalance epsilon must be >= 0, got {epsilon}")
        return cls(
            k=k,
            epsilon=epsilon,
            max_size=max_size(n, k, epsilon),
            enforce_continuity=enforce_continuity,
            enforce_charge=enforce_charge,
            enforce_gap=enforce_gap,
        )

    def without_gap(self) -> "PartitionConstraints":
        """Copy with the gap constraint disabled (used on coarsened graphs)."""
        return PartitionConstraints(
            self.k, self.epsilon, self.max_size, self.enforce_continuity,
            self.enforce_charge, enforce_gap=False,
        )


def max_size(n: int, k: int, epsilon: float) -> int:
    """Largest allowed fragment size: floor((1+epsilon) * ceil(n/k)).

    Fractional capacity cannot be occupied by whole nodes, so the product is
    floored.
    """
    if n < 1 or k < 2 or epsilon < 0:
        raise ValueError(f"invalid arguments n={n}, k={k}, epsilon={epsilon}")
    return int(math.floor((1.0 + epsilon) * math.ceil(n / k)))


@dataclass
class Partition:
    """Node-to-fragment assignment with per-fragment bookkeeping.

    Fragment ids are dense in 0..fragment_count-1 and every fragment is
    non-empty. ``fragment_charges`` counts charged nodes per fragment and is
    recomputable from the assignment plus the graph's charge flags.
    """

    assignment: list[int]
    fragment_count: int
    fragment_sizes: list[int]
    fragment_charges: list[int]

    @classmethod
    def from_assignment(
        cls,
        assignment: Sequence[int],
        charged: Optional[Sequence[bool]] = None,
    ) -> "Partition":
        """Build from a dense assignment (fragment ids 0..max with no holes)."""
        if not assignment:
            raise ValueError("empty assignment")
        count = max(assignment) + 1
        sizes = [0] * count
        charges = [0] * count
        for v, f in enumerate(assignment):
            if f < 0:
                raise ValueError(f"node {v} is unassigned")
            sizes[f] += 1
            if charged is not None and charged[v]:
                charges[f] += 1
        for f, s in enumerate(sizes):
            if s == 0:
                raise ValueError(f"fragment {f} is empty")
        return cls(list(assignment), count, sizes, charges)

    @classmethod
    def from_sparse_assignment(
        cls,
        assignment: Sequence[int],
        charged: Optional[Sequence[bool]] = None,
    ) -> "Partition":
        """Build from arbitrary labels, renumbered densely by first appearance."""
        remap: dict[int, int] = {}
        dense = []
        for f in assignment:
            if f not in remap:
                remap[f] = len(remap)
            dense.append(remap[f])
        return cls.from_assignment(dense, charged)

    def members(self, fragment: int) -> list[int]:
        return [v for v, f in enumerate(self.assignment) if f == fragment]

    def copy(self) -> "Partition":
        return Partition(
            list(self.assignment),
            self.fragment_count,
            list(self.fragment_sizes),
            list(self.fragment_charges),
        )


@dataclass
class ConstraintReport:
    """Outcome of checking a partition against the active constraint set.

    ``violations`` holds (id, kind) pairs where id is a fragment id for
    "balance"/"charge"/"continuity" and a node id for "gap".
    """

    balance_ok: bool
    charge_ok: bool
    gap_ok: bool
    continuity_ok: bool
    violations: list[tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.balance_ok and self.charge_ok and self.gap_ok and self.continuity_ok


@dataclass
class PartitionMetrics:
    cut_weight: float
    largest_fragment: int
    estimated_dft_seconds: float
    feasible: bool


def cut_weight(g: ProteinGraph, p: Partition) -> float:
    """Total weight of edges whose endpoints lie in different fragments."""
    assignment = p.assignment
    if len(assignment) != g.node_count:
        raise ValueError(
            f"partition covers {len(assignment)} nodes, graph has {g.node_count}"
        )
    total = 0.0
    for u, v, w in g.edges:
        fu = assignment[u]
        fv = assignment[v]
        if fu < 0 or fv < 0:
            raise ValueError(f"node {u if fu < 0 else v} is unassigned")
        if fu != fv:
            total += w
    return total


def check_constraints(
    g: ProteinGraph, p: Partition, c: PartitionConstraints
) -> ConstraintReport:
    """Check balance, charge, gap, and (optionally) main-chain continuity.

    Inactive constraints report ok with no violations. Sizes and charges are
    recomputed from the assignment, not taken from the partition's caches.
    """
    n = g.node_count
    assignment = p.assignment
    count = p.fragment_count
    sizes = [0] * count
    charges = [0] * count
    for v in range(n):
        f = assignment[v]
        sizes[f] += 1
        if g.charged[v]:
            charges[f] += 1

    violations: list[tuple[int, str]] = []

    balance_ok = True
    for f, s in enumerate(sizes):
        if s > c.max_size:
            balance_ok = False
            violations.append((f, "balance"))

    charge_ok = True
    if c.enforce_charge:
        for f, q in enumerate(charges):
            if q > 1:
                charge_ok = False
                violations.append((f, "charge"))

    gap_ok = True
    if c.enforce_gap:
        for x in range(n - 2):
            if assignment[x] == assignment[x + 2] and assignment[x + 1] != assignment[x]:
                gap_ok = False
                violations.append((x, "gap"))

    continuity_ok = True
    if c.enforce_continuity:
        # Contiguous id interval per fragment: fragment changes n-1 times at most,
        # and a fragment id may never reappear after a switch.
        seen_closed: set[int] = set()
        current = assignment[0]
        for v in range(1, n):
            f = assignment[v]
            if f == current:
                continue
            seen_closed.add(current)
            if f in seen_closed:
                continuity_ok = False
                violations.append((f, "continuity"))
            current = f

    return ConstraintReport(balance_ok, charge_ok, gap_ok, continuity_ok, violations)


def naive_partition(g: ProteinGraph, k: int) -> Partition:
    """Cut the main chain every ceil(n/k) nodes into contiguous blocks.

    The remainder goes to the last block. When n <= (k-1)*ceil(n/k) the result
    has fewer than k fragments; it is returned anyway (callers inspect
    fragment_count) because the baseline must always exist. The charge
    constraint may be violated; callers repair if needed.
    """
    n = g.node_count
    if k > n:
        raise ValueError(f"cannot cut {n} nodes into {k} non-empty fragments")
    if k < 1:
        raise ValueError(f"fragment count must be >= 1, got {k}")
    block = math.ceil(n / k)
    assignment = [v // block for v in range(n)]
    return Partition.from_assignment(assignment, g.charged)


def estimate_dft_time(p: Partition) -> float:
    """Estimated total DFT wall time, summing the quadratic per-fragment fit."""
    total = 0.0
    for s in p.fragment_sizes:
        total += DFT_QUADRATIC * s * s + DFT_LINEAR * s + DFT_CONSTANT
    return total


def evaluate_partition(
    g: ProteinGraph, p: Partition, c: PartitionConstraints
) -> PartitionMetrics:
    """Cut weight, largest fragment, DFT time estimate, and feasibility."""
    report = check_constraints(g, p, c)
    return PartitionMetrics(
        cut_weight=cut_weight(g, p),
        largest_fragment=max(p.fragment_sizes),
        estimated_dft_seconds=estimate_dft_time(p),
        feasible=report.ok,
    )
