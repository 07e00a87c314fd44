"""Command-line interface.

Subcommands: ``partition`` (run one algorithm or the meta runner on a graph
file), ``oracle`` (exhaustive reference solver for small instances), and
``experiment`` (full seeded grid from a config file). Exit codes: 0 feasible
result, 2 infeasible, 1 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path
from typing import Optional

from .dp import dp_partition
from .experiment import parse_config, run_experiment
from .fileio import parse_charges, parse_graph, read_partition, write_partition
from .graph import (
    GraphFormatError,
    InfeasibleError,
    Partition,
    PartitionConstraints,
    ProteinGraph,
    check_constraints,
    cut_weight,
    estimate_dft_time,
    naive_partition,
)
from .greedy import greedy_partition
from .meta import RunReport, meta_partition
from .multilevel import multilevel_partition
from .oracle import exact_general, exact_mainchain
from .repair import repair_partition

EXIT_FEASIBLE = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2

REPORT_COLUMNS = (
    "algorithm",
    "cut_weight",
    "fragment_count",
    "feasible",
    "reached_k",
    "seconds",
    "improvement_vs_naive",
    "error",
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    parser = _Parser(prog="protpart", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    part = sub.add_parser("partition", help="partition a protein graph")
    part.add_argument("graph", help="graph file (header 'n m', lines 'u v w')")
    part.add_argument("--charges", help="file with charged node ids")
    part.add_argument("-k", type=int, default=2, help="fragment count (default 2)")
    part.add_argument(
        "--epsilon", type=float, default=0.1, help="imbalance (default 0.1)"
    )
    part.add_argument(
        "--algo",
        choices=("dp", "greedy", "multilevel", "naive", "meta", "repair"),
        default="meta",
    )
    part.add_argument(
        "--external-partition",
        help="partition file from an external partitioner (required for --algo repair)",
    )
    part.add_argument("--output", help="write the resulting partition here")
    part.add_argument("--report", help="write a per-algorithm CSV report here")
    part.add_argument(
        "--seed",
        type=int,
        default=0,
        help="seed for stochastic variants (current algorithms are deterministic)",
    )

    orc = sub.add_parser("oracle", help="exhaustive solver for small instances")
    orc.add_argument("graph")
    orc.add_argument("--charges")
    orc.add_argument("-k", type=int, default=2)
    orc.add_argument("--epsilon", type=float, default=0.1)
    orc.add_argument("--mode", choices=("mainchain", "general"), default="mainchain")
    orc.add_argument("--output", help="write the optimal partition here")

    exp = sub.add_parser("experiment", help="run an experiment grid from a config")
    exp.add_argument("config", help="flat key=value config file")
    exp.add_argument(
        "--no-figures", action="store_true", help="skip figure rendering"
    )
    return parser


def _load_graph(args) -> ProteinGraph:
    graph = parse_graph(Path(args.graph).read_text())
    if args.charges:
        flags = parse_charges(Path(args.charges).read_text(), graph.node_count)
        graph = graph.with_charges([v for v, f in enumerate(flags) if f])
    return graph


def _single_report_rows(
    name: str, g: ProteinGraph, p: Partition, c: PartitionConstraints, seconds: float
) -> list[dict]:
    report = check_constraints(g, p, c)
    return [
        {
            "algorithm": name,
            "cut_weight": f"{cut_weight(g, p):.6f}",
            "fragment_count": p.fragment_count,
            "feasible": int(report.ok),
            "reached_k": int(p.fragment_count == c.k),
            "seconds": f"{seconds:.3f}",
            "improvement_vs_naive": "",
            "error": "",
        }
    ]


def _meta_report_rows(report: RunReport) -> list[dict]:
    rows = []
    for r in report.results:
        improvement = report.improvement(r.name)
        rows.append(
            {
                "algorithm": r.name,
                "cut_weight": "" if r.cut is None else f"{r.cut:.6f}",
                "fragment_count": "" if r.fragment_count is None else r.fragment_count,
                "feasible": int(r.feasible),
                "reached_k": int(r.reached_k),
                "seconds": f"{r.seconds:.3f}",
                "improvement_vs_naive": ""
                if improvement is None
                else f"{improvement:.6f}",
                "error": r.error or "",
            }
        )
    return rows


def _write_report(rows: list[dict], path: str, figure: bool) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=REPORT_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    if figure and len(rows) > 1:
        from .figures import render_run_figure

        render_run_figure(rows, Path(path).with_suffix(".png"))


def _cmd_partition(args) -> int:
    graph = _load_graph(args)
    constraints = PartitionConstraints.create(graph.node_count, args.k, args.epsilon)

    external: Optional[Partition] = None
    if args.external_partition:
        external = read_partition(
            Path(args.external_partition).read_text(), graph.node_count, graph.charged
        )
    if args.algo == "repair" and external is None:
        print("error: --algo repair requires --external-partition", file=sys.stderr)
        return EXIT_USAGE

    if args.algo == "meta":
        report = meta_partition(
            graph, constraints, external, instance=Path(args.graph).stem
        )
        for r in report.results:
            if r.error:
                print(f"{r.name:<11} infeasible: {r.error}")
            else:
                imp = report.improvement(r.name)
                extra = f"  improvement={imp:.1%}" if imp is not None else ""
                print(
                    f"{r.name:<11} cut={r.cut:.4f} fragments={r.fragment_count} "
                    f"feasible={r.feasible} time={r.seconds:.3f}s{extra}"
                )
        winner = report.result(report.winner) if report.winner else None
        if winner is None:
            print("no feasible partition found", file=sys.stderr)
            if args.report:
                _write_report(_meta_report_rows(report), args.report, figure=True)
            return EXIT_INFEASIBLE
        print(
            f"winner: {report.winner} cut={report.winner_cut:.4f} "
            f"estimated_dft={estimate_dft_time(winner.partition):.1f}s"
        )
        if args.output:
            Path(args.output).write_text(write_partition(winner.partition))
        if args.report:
            _write_report(_meta_report_rows(report), args.report, figure=True)
        ok = winner.feasible and winner.reached_k
        return EXIT_FEASIBLE if ok else EXIT_INFEASIBLE

    start = time.perf_counter()
    try:
        if args.algo == "dp":
            partition = dp_partition(graph, constraints)
        elif args.algo == "greedy":
            partition = greedy_partition(graph, constraints)
        elif args.algo == "naive":
            partition = naive_partition(graph, args.k)
        elif args.algo == "repair":
            partition = repair_partition(graph, external, constraints)
        else:  # multilevel, guided by the better of dp and greedy
            guide = None
            guide_cut = None
            for candidate in (_try_dp(graph, constraints), greedy_partition(graph, constraints)):
                if candidate is None or candidate.fragment_count != args.k:
                    continue
                cand_cut = cut_weight(graph, candidate)
                if guide_cut is None or cand_cut < guide_cut:
                    guide, guide_cut = candidate, cand_cut
            partition = multilevel_partition(graph, constraints, guide)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    seconds = time.perf_counter() - start

    report = check_constraints(graph, partition, constraints)
    print(
        f"{args.algo}: cut={cut_weight(graph, partition):.4f} "
        f"fragments={partition.fragment_count} feasible={report.ok} "
        f"time={seconds:.3f}s estimated_dft={estimate_dft_time(partition):.1f}s"
    )
    if args.output:
        Path(args.output).write_text(write_partition(partition))
    if args.report:
        rows = _single_report_rows(args.algo, graph, partition, constraints, seconds)
        _write_report(rows, args.report, figure=False)
    ok = report.ok and partition.fragment_count == args.k
    return EXIT_FEASIBLE if ok else EXIT_INFEASIBLE


def _try_dp(g: ProteinGraph, c: PartitionConstraints) -> Optional[Partition]:
    try:
        return dp_partition(g, c)
    except InfeasibleError:
        return None


def _cmd_oracle(args) -> int:
    graph = _load_graph(args)
    constraints = PartitionConstraints.create(graph.node_count, args.k, args.epsilon)
    solver = exact_mainchain if args.mode == "mainchain" else exact_general
    try:
        partition = solver(graph, constraints)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(
        f"optimal {args.mode} cut={cut_weight(graph, partition):.6f} "
        f"fragments={partition.fragment_count}"
    )
    if args.output:
        Path(args.output).write_text(write_partition(partition))
    return EXIT_FEASIBLE


def _cmd_experiment(args) -> int:
    cfg = parse_config(Path(args.config).read_text())
    if args.no_figures:
        cfg.figures = False
    csv_path = run_experiment(cfg)
    print(f"report written to {csv_path}")
    return EXIT_FEASIBLE


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "partition":
            return _cmd_partition(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
        return _cmd_experiment(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (OSError, GraphFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
