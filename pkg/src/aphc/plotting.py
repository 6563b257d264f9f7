"""Figures for bench reports: packet-length histogram and per-category ratios."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bench import histogram_rows  # noqa: E402
from .trace_io import CATEGORIES  # noqa: E402


def plot_length_histogram(report, path):
    rows = histogram_rows(report.stats)
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.bar(range(len(rows)), [c for _, c in rows], color="0.35")
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels([label for label, _ in rows], rotation=45, ha="right", fontsize=8)
    ax.set_xlabel("packet length (bytes)")
    ax.set_ylabel("packets")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_category_ratios(report, path):
    rows = [r for r in report.rows if r.ok]
    labels = [f"{name}\n{lo}-{hi}" if hi else f"{name}\n>{lo - 1}" for name, lo, hi in CATEGORIES]
    fig, ax = plt.subplots(figsize=(8, 4))
    width = 0.8 / max(1, len(rows))
    for k, row in enumerate(rows):
        values = [row.category_ratio(i) or 0.0 for i in range(4)]
        xs = [i + (k - (len(rows) - 1) / 2) * width for i in range(4)]
        ax.bar(xs, values, width, label=row.codec)
    ax.axhline(1.0, color="k", lw=0.8, ls="--")
    ax.set_xticks(range(4))
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylabel("compressed / original")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_figures(report, prefix):
    """Write both figures as ``<prefix>_lengths.png`` and ``<prefix>_ratios.png``."""
    return [plot_length_histogram(report, f"{prefix}_lengths.png"),
            plot_category_ratios(report, f"{prefix}_ratios.png")]
