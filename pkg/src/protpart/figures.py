"""Comparison figures rendered next to the CSV report.

One figure per (instance, epsilon) shows each algorithm's cut weight relative
to the naive baseline across fragment counts (uncharged runs); a summary
figure shows the geometric-mean winner improvement per epsilon.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .experiment import geometric_mean_improvement

ALGO_STYLES = (
    ("dp_cut", "dp", "tab:blue", "o"),
    ("greedy_cut", "greedy", "tab:orange", "s"),
    ("multilevel_cut", "multilevel", "tab:green", "^"),
    ("winner_cut", "meta winner", "black", "*"),
)


def render_experiment_figures(rows: Sequence[dict], out_dir: Path) -> list[Path]:
    """Render all figures for the given report rows; returns written paths."""
    out_dir = Path(out_dir)
    written = []
    combos = sorted({(r["instance"], r["epsilon"]) for r in rows})
    for instance, epsilon in combos:
        uncharged = [
            r
            for r in rows
            if r["instance"] == instance
            and r["epsilon"] == epsilon
            and int(r["charged_count"]) == 0
            and r["naive_cut"]
        ]
        if not uncharged:
            continue
        uncharged.sort(key=lambda r: int(r["k"]))
        ks = [int(r["k"]) for r in uncharged]
        eps_label = f"{float(epsilon):g}"
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        for column, label, color, marker in ALGO_STYLES:
            ratios = []
            for r in uncharged:
                if r[column]:
                    ratios.append(float(r[column]) / float(r["naive_cut"]))
                else:
                    ratios.append(float("nan"))
            ax.plot(ks, ratios, color=color, marker=marker, label=label)
        ax.axhline(1.0, color="gray", linestyle="--", linewidth=1, label="naive")
        ax.set_xlabel("fragments k")
        ax.set_ylabel("cut weight / naive cut weight")
        ax.set_title(f"{instance}, epsilon={eps_label}")
        ax.set_xticks(ks)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = out_dir / f"fig_{instance}_eps{eps_label}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)

    by_eps: dict[str, list[float]] = {}
    for r in rows:
        if r["winner_cut"] and r["naive_cut"]:
            by_eps.setdefault(str(r["epsilon"]), []).append(
                float(r["winner_cut"]) / float(r["naive_cut"])
            )
    if by_eps:
        fig, ax = plt.subplots(figsize=(5.0, 3.5))
        labels = sorted(by_eps, key=float)
        values = [100 * geometric_mean_improvement(by_eps[e]) for e in labels]
        labels = [f"{float(e):g}" for e in labels]
        ax.bar(labels, values, color="tab:blue", width=0.5)
        ax.set_xlabel("epsilon")
        ax.set_ylabel("geometric-mean improvement vs naive [%]")
        ax.set_title("meta winner improvement")
        fig.tight_layout()
        path = out_dir / "fig_summary.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written


def render_run_figure(report_rows: Sequence[dict], path: Path) -> Path:
    """Bar chart of per-algorithm cut weights for a single meta run."""
    named = [
        (r["algorithm"], float(r["cut_weight"]))
        for r in report_rows
        if r.get("cut_weight") not in (None, "")
    ]
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    names = [n for n, _ in named]
    cuts = [c for _, c in named]
    ax.bar(names, cuts, color="tab:blue", width=0.5)
    ax.set_ylabel("cut weight")
    ax.set_title("cut weight per algorithm")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)
