"""Figures for the L sweep and the extractive ablation table.

Rendered off-screen with the Agg backend; callers pass an output path and
the format follows its suffix (png, pdf, svg).
"""

from __future__ import annotations

from typing import Dict, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from wikilead.evaluation import BootstrapCI, SweepPoint  # noqa: E402
from wikilead.rouge import METRICS  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "xtick.labelsize": 9,
    "ytick.labelsize": 9,
    "legend.fontsize": 8,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.2,
    "savefig.dpi": 150,
    "svg.hashsalt": "wikilead",
}
_LABELS = {"random": "Random", "tfidf": "TF-IDF", "cheating": "Cheating"}
_METRIC_LABELS = {"r1": "R1 F", "r2": "R2 F", "rl": "RL F"}


def _hide_right_top(ax):
    for side in ("right", "top"):
        ax.spines[side].set_visible(False)


def plot_sweep(points: Sequence[SweepPoint], path, label: str = "TF-IDF") -> None:
    """Line plot of R2 recall (%) against L, one marker per point."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.0, 2.8))
        xs = [p.L for p in points]
        ys = [100 * p.r2_recall_mean for p in points]
        ax.plot(xs, ys, marker="s", markersize=4, label=_LABELS.get(label, label))
        ax.set_xlabel("L")
        ax.set_ylabel("R2 R (%)")
        ax.set_xticks(xs)
        ax.set_ylim(bottom=0)
        ax.grid(axis="y", linestyle="--", linewidth=0.5)
        ax.legend(loc="lower right", frameon=False)
        _hide_right_top(ax)
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
        plt.close(fig)


def plot_experiment(table: Dict[str, Dict[str, BootstrapCI]], path) -> None:
    """Grouped bars of mean F (%) per metric with the bootstrap interval as error bars."""
    names = list(table)
    width = 0.8 / max(len(names), 1)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 2.8))
        for k, name in enumerate(names):
            cis = [table[name][m] for m in METRICS]
            xs = [i + (k - (len(names) - 1) / 2) * width for i in range(len(METRICS))]
            means = [100 * c.mean for c in cis]
            err = [
                [100 * (c.mean - c.lo) for c in cis],
                [100 * (c.hi - c.mean) for c in cis],
            ]
            err = [[max(0.0, e) for e in row] for row in err]
            ax.bar(xs, means, width, yerr=err, capsize=2, label=_LABELS.get(name, name))
        ax.set_xticks(range(len(METRICS)))
        ax.set_xticklabels([_METRIC_LABELS[m] for m in METRICS])
        ax.set_ylabel("F (%)")
        ax.legend(frameon=False)
        _hide_right_top(ax)
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
        plt.close(fig)
