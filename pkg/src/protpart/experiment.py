"""Experiment harness: instance grids, seeded runs, CSV reports, summaries.

For every instance and every fragment count the harness performs one
uncharged run plus a configurable number of charged runs (random charge sets
that still admit a feasible main-chain partition), across a grid of imbalance
values. Charged comparisons use the repaired naive partition as the baseline.
Per-cell seeds derive from the master seed and the cell coordinates, so
reports are reproducible bit for bit regardless of execution order.
"""

from __future__ import annotations

import csv
import math
import random
import sys
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, TextIO

from .fileio import parse_charges, parse_graph
from .graph import InfeasibleError, PartitionConstraints, ProteinGraph
from .meta import RunReport, meta_partition
from .synth import sample_charges, synth_protein

SMALL_INSTANCE_K = (2, 4, 6, 8)
LARGE_INSTANCE_K = (8, 12, 16, 20, 24)
SMALL_INSTANCE_LIMIT = 100

CSV_COLUMNS = (
    "instance",
    "n",
    "m",
    "k",
    "epsilon",
    "charged_count",
    "charge_seed",
    "naive_cut",
    "naive_repaired",
    "dp_cut",
    "dp_feasible",
    "greedy_cut",
    "greedy_feasible",
    "greedy_fragments",
    "multilevel_cut",
    "multilevel_feasible",
    "winner",
    "winner_cut",
    "winner_reached_k",
    "improvement_winner",
    "improvement_dp",
)


@dataclass
class ExperimentConfig:
    instances: list[str] = field(default_factory=list)
    synthetic_sizes: list[int] = field(default_factory=list)
    k_values: Optional[list[int]] = None  # None: size-based default grid
    epsilons: list[float] = field(default_factory=lambda: [0.1, 0.2])
    charged_runs: int = 20
    charge_fraction: float = 0.8
    seed: int = 1
    output: str = "results"
    figures: bool = True


def parse_config(text: str) -> ExperimentConfig:
    """Parse the flat key=value experiment config format."""
    cfg = ExperimentConfig()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {number}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        try:
            if key == "instances":
                cfg.instances = [p.strip() for p in value.split(",") if p.strip()]
            elif key == "synthetic_sizes":
                cfg.synthetic_sizes = [int(x) for x in value.replace(",", " ").split()]
            elif key == "k":
                cfg.k_values = (
                    None
                    if value.lower() == "auto"
                    else [int(x) for x in value.replace(",", " ").split()]
                )
            elif key == "epsilon":
                cfg.epsilons = [float(x) for x in value.replace(",", " ").split()]
            elif key == "charged_runs":
                cfg.charged_runs = int(value)
            elif key == "charge_fraction":
                cfg.charge_fraction = float(value)
            elif key == "seed":
                cfg.seed = int(value)
            elif key == "output":
                cfg.output = value
            elif key == "figures":
                cfg.figures = value.lower() in ("1", "true", "yes", "on")
            else:
                raise ValueError(f"config line {number}: unknown key '{key}'")
        except ValueError as exc:
            if "unknown key" in str(exc):
                raise
            raise ValueError(f"config line {number}: bad value for '{key}'") from None
    if not cfg.instances and not cfg.synthetic_sizes:
        raise ValueError("config must set 'instances' or 'synthetic_sizes'")
    if not cfg.epsilons:
        raise ValueError("config must set at least one epsilon")
    return cfg


def derive_seed(master: int, *coordinates: object) -> int:
    """Stable per-cell seed from the master seed and cell coordinates."""
    text = ":".join([str(master)] + [str(c) for c in coordinates])
    return zlib.crc32(text.encode("utf-8"))


def default_k_grid(n: int) -> list[int]:
    grid = SMALL_INSTANCE_K if n <= SMALL_INSTANCE_LIMIT else LARGE_INSTANCE_K
    return [k for k in grid if k <= n]


def _load_instances(cfg: ExperimentConfig) -> list[tuple[str, ProteinGraph, Optional[list[int]]]]:
    """(name, graph, charge candidate ids or None) per instance."""
    out = []
    for path_text in cfg.instances:
        path = Path(path_text)
        graph = parse_graph(path.read_text())
        candidates = None
        candidate_path = path.with_suffix(".charges")
        if candidate_path.exists() and candidate_path != path:
            flags = parse_charges(candidate_path.read_text(), graph.node_count)
            candidates = [v for v, f in enumerate(flags) if f]
        out.append((path.stem, graph, candidates))
    for n in cfg.synthetic_sizes:
        graph = synth_protein(n, seed=derive_seed(cfg.seed, "synth", n))
        out.append((f"synth{n}", graph, None))
    return out


def _report_row(report: RunReport, repaired: bool) -> dict:
    # wall times stay out of the table so reports are bit-for-bit reproducible
    def fmt(value: object) -> object:
        if value is None:
            return ""
        if isinstance(value, float):
            return f"{value:.6f}"
        return value

    dp = report.result("dp")
    greedy = report.result("greedy")
    ml = report.result("multilevel")
    return {
        "instance": report.instance,
        "n": report.n,
        "m": report.m,
        "k": report.k,
        "epsilon": fmt(report.epsilon),
        "charged_count": len(report.charged_nodes),
        "charge_seed": fmt(report.charge_seed),
        "naive_cut": fmt(report.naive_cut),
        "naive_repaired": int(repaired),
        "dp_cut": fmt(dp.cut if dp else None),
        "dp_feasible": int(bool(dp and dp.feasible)),
        "greedy_cut": fmt(greedy.cut if greedy else None),
        "greedy_feasible": int(bool(greedy and greedy.feasible and greedy.reached_k)),
        "greedy_fragments": fmt(greedy.fragment_count if greedy else None),
        "multilevel_cut": fmt(ml.cut if ml else None),
        "multilevel_feasible": int(bool(ml and ml.feasible)),
        "winner": report.winner or "",
        "winner_cut": fmt(report.winner_cut),
        "winner_reached_k": int(report.winner_reached_k),
        "improvement_winner": fmt(report.winner_improvement),
        "improvement_dp": fmt(report.improvement("dp")),
    }


def geometric_mean_improvement(ratios: Sequence[float]) -> float:
    """1 - geometric mean of cut/naive ratios; 0.0 for an empty sequence."""
    if not ratios:
        return 0.0
    log_sum = sum(math.log(r) for r in ratios)
    return 1.0 - math.exp(log_sum / len(ratios))


def run_experiment(cfg: ExperimentConfig, log: TextIO = sys.stderr) -> Path:
    """Run the full grid; returns the path of the CSV report.

    Writes report.csv and summary.txt into the output directory, plus
    comparison figures unless disabled. Instance-level failures (for example
    no feasible charge sample) are logged and skipped.
    """
    out_dir = Path(cfg.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    instances = _load_instances(cfg)

    rows: list[dict] = []
    reports: list[RunReport] = []
    for name, graph, candidates in instances:
        k_grid = cfg.k_values if cfg.k_values is not None else default_k_grid(graph.node_count)
        for k in k_grid:
            if k < 2 or k > graph.node_count:
                print(f"skipping {name} k={k}: out of range", file=log)
                continue
            charge_sets: list[tuple[Optional[int], list[int]]] = [(None, [])]
            min_eps = min(cfg.epsilons)
            for run in range(cfg.charged_runs):
                cell_seed = derive_seed(cfg.seed, name, k, run)
                rng = random.Random(cell_seed)
                try:
                    chosen = sample_charges(
                        graph, k, min_eps, rng, candidates, cfg.charge_fraction
                    )
                except InfeasibleError as exc:
                    print(f"skipping {name} k={k} run={run}: {exc}", file=log)
                    continue
                charge_sets.append((cell_seed, chosen))
            for epsilon in cfg.epsilons:
                constraints = PartitionConstraints.create(graph.node_count, k, epsilon)
                for charge_seed, charges in charge_sets:
                    charged_graph = graph.with_charges(charges) if charges else graph
                    report = meta_partition(
                        charged_graph,
                        constraints,
                        instance=name,
                        charge_seed=charge_seed,
                    )
                    naive = report.result("naive")
                    rows.append(_report_row(report, bool(naive and naive.repaired)))
                    reports.append(report)

    csv_path = out_dir / "report.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)

    summary = summarize(reports)
    (out_dir / "summary.txt").write_text(summary)
    print(summary, end="")

    if cfg.figures:
        from .figures import render_experiment_figures

        render_experiment_figures(rows, out_dir)
    return csv_path


def summarize(reports: Sequence[RunReport]) -> str:
    """Per-instance, per-k winner improvements plus geometric means per epsilon."""
    lines = ["meta winner improvement vs naive", ""]
    lines.append(f"{'instance':<12} {'k':>3} {'eps':>5} {'uncharged':>10} {'charged':>10}")
    cells: dict[tuple[str, int, float], dict[str, list[float]]] = {}
    for r in reports:
        if r.winner_cut is None or not r.naive_cut:
            continue
        cell = cells.setdefault((r.instance, r.k, r.epsilon), {"un": [], "ch": []})
        ratio = r.winner_cut / r.naive_cut
        cell["ch" if r.charged_nodes else "un"].append(ratio)
    for (instance, k, epsilon), cell in sorted(cells.items()):
        un = (
            f"{geometric_mean_improvement(cell['un']):>9.1%}" if cell["un"] else f"{'-':>10}"
        )
        ch = (
            f"{geometric_mean_improvement(cell['ch']):>9.1%}" if cell["ch"] else f"{'-':>10}"
        )
        lines.append(f"{instance:<12} {k:>3} {epsilon:>5.2f} {un:>10} {ch:>10}")
    lines.append("")
    by_eps: dict[float, list[float]] = {}
    for r in reports:
        if r.winner_cut is None or not r.naive_cut:
            continue
        by_eps.setdefault(r.epsilon, []).append(r.winner_cut / r.naive_cut)
    for epsilon in sorted(by_eps):
        ratios = by_eps[epsilon]
        lines.append(
            f"epsilon={epsilon:.2f}: geometric-mean improvement "
            f"{geometric_mean_improvement(ratios):.1%} over {len(ratios)} runs"
        )
    return "\n".join(lines) + "\n"
