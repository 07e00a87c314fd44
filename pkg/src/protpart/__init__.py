"""Constrained partitioning of weighted protein graphs into balanced fragments.

Splits a chain-ordered, weighted interaction graph into size-bounded
fragments with minimum cut weight, under chemistry-specific constraints: at
most one charged node per fragment, no single-node gaps on the chain, and
optionally fragments contiguous on the main chain. Provides an optimal
dynamic program for the contiguous case, greedy and multilevel-FM heuristics
for the general case, a repair pass for external partitions, exhaustive
reference solvers, and a seeded experiment harness.
"""

from .dp import CutColumn, DPTables, compute_cut_column, compute_window_start, dp_partition
from .experiment import (
    ExperimentConfig,
    geometric_mean_improvement,
    parse_config,
    run_experiment,
)
from .fileio import (
    parse_charges,
    parse_graph,
    read_partition,
    write_charges,
    write_graph,
    write_partition,
)
from .graph import (
    ConstraintReport,
    GraphFormatError,
    InfeasibleError,
    Partition,
    PartitionConstraints,
    PartitionMetrics,
    ProteinGraph,
    UNASSIGNED,
    check_constraints,
    cut_weight,
    estimate_dft_time,
    evaluate_partition,
    max_size,
    naive_partition,
)
from .greedy import MergeState, can_merge, greedy_partition
from .meta import AlgorithmResult, RunReport, meta_partition
from .multilevel import (
    CoarseningHierarchy,
    coarsen,
    fm_refine,
    initial_partition,
    multilevel_partition,
    project,
    rebalance,
)
from .oracle import exact_general, exact_mainchain
from .repair import CutWeightTable, build_cut_weight_table, repair_partition
from .synth import SynthParams, sample_charges, synth_protein

__version__ = "0.1.0"

__all__ = [
    "AlgorithmResult",
    "CoarseningHierarchy",
    "ConstraintReport",
    "CutColumn",
    "CutWeightTable",
    "DPTables",
    "ExperimentConfig",
    "GraphFormatError",
    "InfeasibleError",
    "MergeState",
    "Partition",
    "PartitionConstraints",
    "PartitionMetrics",
    "ProteinGraph",
    "RunReport",
    "SynthParams",
    "UNASSIGNED",
    "build_cut_weight_table",
    "can_merge",
    "check_constraints",
    "coarsen",
    "compute_cut_column",
    "compute_window_start",
    "cut_weight",
    "dp_partition",
    "estimate_dft_time",
    "evaluate_partition",
    "exact_general",
    "exact_mainchain",
    "fm_refine",
    "geometric_mean_improvement",
    "greedy_partition",
    "initial_partition",
    "max_size",
    "meta_partition",
    "multilevel_partition",
    "naive_partition",
    "parse_charges",
    "parse_config",
    "parse_graph",
    "project",
    "read_partition",
    "rebalance",
    "repair_partition",
    "run_experiment",
    "sample_charges",
    "synth_protein",
    "write_charges",
    "write_graph",
    "write_partition",
]
