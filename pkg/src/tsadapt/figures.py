"""Matplotlib renderings of the report tables.

Everything uses the Agg backend so rendering works headless. Each function
writes one PNG and returns its path; the delimited files remain the
authoritative output, the figures are companions for quick reading.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .stats import PairwiseMatrix


def render_pvalue_heatmap(matrix: PairwiseMatrix, path) -> Path:
    """Square heatmap of pairwise p-values with in-cell annotations."""
    ids = matrix.method_ids
    n = len(ids)
    fig, ax = plt.subplots(figsize=(1.1 * n + 2.2, 1.1 * n + 1.6))
    im = ax.imshow(matrix.p, cmap="viridis", vmin=0.0, vmax=1.0)
    ax.set_xticks(range(n), labels=ids, rotation=45, ha="right")
    ax.set_yticks(range(n), labels=ids)
    for i in range(n):
        for j in range(n):
            v = matrix.p[i, j]
            ax.text(
                j,
                i,
                "%.3g" % v,
                ha="center",
                va="center",
                fontsize=8,
                color="white" if v < 0.5 else "black",
            )
    ax.set_title("pairwise Welch p-values")
    fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def render_rank_bars(method_ids, ranks, path) -> Path:
    """Horizontal bars of average rank, best (lowest) on top."""
    ranks = np.asarray(ranks, dtype=float)
    order = np.argsort(ranks, kind="stable")
    ids = [method_ids[i] for i in order]
    vals = ranks[order]
    fig, ax = plt.subplots(figsize=(7.0, 0.5 * len(ids) + 1.6))
    y = np.arange(len(ids))
    ax.barh(y, vals, color="#4878a8")
    ax.set_yticks(y, labels=ids)
    ax.invert_yaxis()
    ax.set_xlabel("average rank (lower is better)")
    for yi, v in zip(y, vals):
        ax.text(v, yi, " %.3g" % v, va="center", fontsize=9)
    ax.set_xlim(0, max(vals) * 1.15)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def render_timing_bars(timing_rows, path) -> Path:
    """Mean wall seconds per method, averaged over datasets, log scale."""
    methods: list[str] = []
    for _, m, _ in timing_rows:
        if m not in methods:
            methods.append(m)
    means = [
        float(np.mean([wall for _, m, wall in timing_rows if m == method]))
        for method in methods
    ]
    fig, ax = plt.subplots(figsize=(1.0 * len(methods) + 3.0, 4.2))
    x = np.arange(len(methods))
    ax.bar(x, means, color="#8a5fa8")
    ax.set_xticks(x, labels=methods, rotation=30, ha="right")
    ax.set_ylabel("mean wall seconds per run")
    if max(means) > 0 and max(means) / max(min(m for m in means if m > 0), 1e-12) > 50:
        ax.set_yscale("log")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)
