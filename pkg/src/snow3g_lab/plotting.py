"""Figures for benchmark reports, written next to the delimited output."""

from __future__ import annotations

import os
from typing import List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bench import FUNCTIONS, BenchReport  # noqa: E402
from .report import config_total  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.fontsize": 7,
    "legend.frameon": False,
}


def _labels(report: BenchReport) -> List[str]:
    return [c.config_id + (f"\n{c.group}" if c.group else "") for c in report.configs]


def plot_breakdown(report: BenchReport, path: str) -> str:
    """Stacked per-function self time for each configuration."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(max(4.0, 0.9 * len(report.configs) + 2), 3.6))
        labels = _labels(report)
        x = range(len(labels))
        bottom = [0.0] * len(labels)
        cmap = plt.get_cmap("tab10")
        for k, name in enumerate(FUNCTIONS):
            heights = [c.timing(name).total_ms for c in report.configs]
            if not any(heights):
                continue
            ax.bar(x, heights, bottom=bottom, label=name, color=cmap(k % 10), width=0.7)
            bottom = [b + h for b, h in zip(bottom, heights)]
        ax.set_xticks(list(x))
        ax.set_xticklabels(labels, rotation=45, ha="right")
        ax.set_ylabel("self time per run (ms)")
        ax.set_yscale("log" if _wide_range(bottom) else "linear")
        ax.legend(loc="upper left", bbox_to_anchor=(1.0, 1.0))
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)
    return path


def plot_totals(report: BenchReport, path: str) -> str:
    """Total time per configuration, instrumented next to uninstrumented."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(max(4.0, 0.8 * len(report.configs) + 1.5), 3.2))
        labels = _labels(report)
        x = [float(i) for i in range(len(labels))]
        instrumented = [c.total_ms for c in report.configs]
        clean = [config_total(c) for c in report.configs]
        ax.bar([i - 0.18 for i in x], instrumented, width=0.36, label="instrumented", color="0.6")
        ax.bar([i + 0.18 for i in x], clean, width=0.36, label="uninstrumented", color="C0")
        ax.set_xticks(x)
        ax.set_xticklabels(labels, rotation=45, ha="right")
        ax.set_ylabel("total per run (ms)")
        ax.set_yscale("log" if _wide_range(instrumented) else "linear")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)
    return path


def _wide_range(values) -> bool:
    positive = [v for v in values if v > 0]
    return bool(positive) and max(positive) / min(positive) > 20


def render_figures(report: BenchReport, stem: str) -> List[str]:
    """Write ``<stem>_breakdown.png`` and ``<stem>_totals.png``."""
    directory = os.path.dirname(stem)
    if directory:
        os.makedirs(directory, exist_ok=True)
    return [
        plot_breakdown(report, f"{stem}_breakdown.png"),
        plot_totals(report, f"{stem}_totals.png"),
    ]
