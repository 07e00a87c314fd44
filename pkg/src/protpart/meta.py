"""Meta algorithm: run every partitioner, keep the best feasible result.

The naive baseline (repaired when charges break it) always participates, so
the winner is never worse than naive. The multilevel run is guided by the
better of the DP and greedy partitions.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

from .dp import dp_partition
from .graph import (
    ConstraintReport,
    InfeasibleError,
    Partition,
    PartitionConstraints,
    ProteinGraph,
    check_constraints,
    cut_weight,
    naive_partition,
)
from .greedy import greedy_partition
from .multilevel import multilevel_partition
from .repair import repair_partition


@dataclass
class AlgorithmResult:
    name: str
    partition: Optional[Partition] = None
    cut: Optional[float] = None
    fragment_count: Optional[int] = None
    feasible: bool = False
    reached_k: bool = False
    seconds: float = 0.0
    error: Optional[str] = None
    report: Optional[ConstraintReport] = None
    repaired: bool = False

    @property
    def usable(self) -> bool:
        return self.partition is not None and self.feasible


@dataclass
class RunReport:
    """Outcome of one meta run on one instance."""

    instance: str
    n: int
    m: int
    k: int
    epsilon: float
    charged_nodes: list[int]
    charge_seed: Optional[int]
    results: list[AlgorithmResult]
    naive_cut: Optional[float] = None
    winner: Optional[str] = None
    winner_cut: Optional[float] = None
    winner_reached_k: bool = True

    def result(self, name: str) -> Optional[AlgorithmResult]:
        for r in self.results:
            if r.name == name:
                return r
        return None

    def improvement(self, name: str) -> Optional[float]:
        """Relative cut reduction vs the (possibly repaired) naive baseline."""
        r = self.result(name)
        if r is None or r.cut is None or not self.naive_cut:
            return None
        return 1.0 - r.cut / self.naive_cut

    @property
    def winner_improvement(self) -> Optional[float]:
        if self.winner is None:
            return None
        return self.improvement(self.winner)


def _run_algorithm(
    name: str,
    runner: Callable[[], Partition],
    g: ProteinGraph,
    c: PartitionConstraints,
) -> AlgorithmResult:
    result = AlgorithmResult(name=name)
    start = time.perf_counter()
    try:
        partition = runner()
    except InfeasibleError as exc:
        result.seconds = time.perf_counter() - start
        result.error = str(exc)
        return result
    result.seconds = time.perf_counter() - start
    result.partition = partition
    result.cut = cut_weight(g, partition)
    result.fragment_count = partition.fragment_count
    result.report = check_constraints(g, partition, c)
    result.feasible = result.report.ok
    result.reached_k = partition.fragment_count == c.k
    return result


def meta_partition(
    g: ProteinGraph,
    c: PartitionConstraints,
    external: Optional[Partition] = None,
    instance: str = "graph",
    charge_seed: Optional[int] = None,
) -> RunReport:
    """Run naive, DP, greedy, multilevel, and optionally repair an external
    partition; pick the minimum-cut feasible result with exactly k fragments.

    When no candidate reaches exactly k fragments, the best feasible one is
    chosen and flagged via ``winner_reached_k``. Per-algorithm failures are
    recorded, never raised.
    """
    if c.k > g.node_count:
        raise InfeasibleError(f"k={c.k} exceeds node count {g.node_count}")
    results: list[AlgorithmResult] = []

    naive_result = _run_algorithm("naive", lambda: naive_partition(g, c.k), g, c)
    if naive_result.partition is not None and not naive_result.feasible:
        start = time.perf_counter()
        repaired = repair_partition(g, naive_result.partition, c)
        naive_result.seconds += time.perf_counter() - start
        naive_result.partition = repaired
        naive_result.cut = cut_weight(g, repaired)
        naive_result.fragment_count = repaired.fragment_count
        naive_result.report = check_constraints(g, repaired, c)
        naive_result.feasible = naive_result.report.ok
        naive_result.reached_k = repaired.fragment_count == c.k
        naive_result.repaired = True
    results.append(naive_result)

    dp_result = _run_algorithm("dp", lambda: dp_partition(g, c), g, c)
    results.append(dp_result)

    greedy_result = _run_algorithm("greedy", lambda: greedy_partition(g, c), g, c)
    results.append(greedy_result)

    guide: Optional[Partition] = None
    guide_cut = None
    for r in (dp_result, greedy_result):
        if r.usable and r.reached_k and (guide_cut is None or r.cut < guide_cut):
            guide = r.partition
            guide_cut = r.cut
    results.append(
        _run_algorithm("multilevel", lambda: multilevel_partition(g, c, guide), g, c)
    )

    if external is not None:
        results.append(
            _run_algorithm("external", lambda: repair_partition(g, external, c), g, c)
        )

    report = RunReport(
        instance=instance,
        n=g.node_count,
        m=g.edge_count,
        k=c.k,
        epsilon=c.epsilon,
        charged_nodes=g.charged_nodes(),
        charge_seed=charge_seed,
        results=results,
        naive_cut=naive_result.cut,
    )

    exact = [r for r in results if r.usable and r.reached_k]
    pool = exact if exact else [r for r in results if r.usable]
    winner: Optional[AlgorithmResult] = None
    for r in pool:
        if winner is None or r.cut < winner.cut:
            winner = r
    if winner is not None:
        report.winner = winner.name
        report.winner_cut = winner.cut
        report.winner_reached_k = winner.reached_k
    return report
