"""Figures for batch runs, written next to the JSON-lines output."""

from __future__ import annotations

import os
from collections import Counter

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

FIGSIZE = (6.0, 4.0)
DPI = 120


def _style(ax, title, xlabel, ylabel):
    ax.set_title(title, fontsize=11)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)


def plot_case_histogram(records, path):
    counts = Counter(r.get("depth", {}).get("case", "n/a") for r in records)
    labels = sorted(counts)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.bar(labels, [counts[k] for k in labels], color="0.35")
    _style(ax, "Depth formula cases", "case", "instances")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def plot_sdepth_vs_depth(records, path):
    pairs = Counter(
        (r["depth"]["oracle"], r["sdepth"]["constructed"])
        for r in records
        if r.get("depth", {}).get("oracle") is not None and r.get("sdepth", {}).get("constructed") is not None
    )
    fig, ax = plt.subplots(figsize=FIGSIZE)
    if pairs:
        xs, ys = zip(*pairs)
        ax.scatter(xs, ys, s=[30 + 10 * c for c in pairs.values()], color="tab:blue", alpha=0.7)
        lo, hi = min(xs + ys), max(xs + ys)
        ax.plot([lo, hi], [lo, hi], color="0.5", linestyle="--", linewidth=1)
    ax.xaxis.set_major_locator(MaxNLocator(integer=True))
    ax.yaxis.set_major_locator(MaxNLocator(integer=True))
    _style(ax, "Constructed sdepth against depth", "depth I", "sdepth of decomposition")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def plot_timings(records, path):
    totals = [sum(r.get("timings_ms", {}).values()) for r in records]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    if totals:
        ax.hist(totals, bins=min(30, max(5, len(totals) // 5)), color="0.35")
    _style(ax, "Per-instance pipeline time", "milliseconds", "instances")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def render_batch_figures(records, outdir) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    paths = []
    for name, fn in (("cases.png", plot_case_histogram),
                     ("sdepth_vs_depth.png", plot_sdepth_vs_depth),
                     ("timings.png", plot_timings)):
        path = os.path.join(outdir, name)
        fn(records, path)
        paths.append(path)
    return paths
