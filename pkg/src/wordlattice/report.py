"""Figure rendering for the report-producing commands.

matplotlib is imported lazily with the Agg backend so plain CLI runs never
pay for it and headless boxes never complain.
"""

from __future__ import annotations

import math
from pathlib import Path

from .prng import HarnessReport
from .shifts import ShiftOfFiniteType, count_words, entropy_transfer_matrix


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def render_entropy_figure(sft: ShiftOfFiniteType, n_max: int, path) -> Path:
    """Finite-n slopes log2|B_n|/n with the transfer-matrix limit line."""
    plt = _pyplot()
    ns = list(range(1, n_max + 1))
    slopes = []
    for n in ns:
        c = count_words(sft, n)
        slopes.append(math.log2(c) / n if c > 0 else 0.0)
    tm = entropy_transfer_matrix(sft)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, slopes, "o-", label="log2|B_n| / n")
    ax.axhline(tm.value, color="crimson", linestyle="--",
               label=f"transfer matrix = {tm.value:.6f}")
    ax.set_xlabel("n")
    ax.set_ylabel("bits per symbol")
    ax.set_title("entropy estimates")
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_harness_figure(report: HarnessReport, path) -> Path:
    """Per-test p-value histograms plus pass fractions with the 99% band."""
    plt = _pyplot()
    aggs = report.aggregates
    fig, axes = plt.subplots(1, len(aggs) + 1, figsize=(4 * (len(aggs) + 1), 3.5))
    for ax, agg in zip(axes, aggs):
        ax.hist(agg.p_values, bins=20, range=(0.0, 1.0), color="steelblue")
        ax.set_title(f"{agg.name} p-values")
        ax.set_xlabel("p")
    ax = axes[-1]
    names = [a.name for a in aggs]
    fracs = [a.pass_fraction for a in aggs]
    ax.bar(names, fracs, color=["seagreen" if a.in_band else "crimson" for a in aggs])
    ax.axhline(aggs[0].band_low, color="gray", linestyle=":")
    ax.axhline(aggs[0].band_high, color="gray", linestyle=":")
    ax.set_ylim(min(0.9, min(fracs) - 0.02 if fracs else 0.9), 1.005)
    ax.set_title(f"pass fractions ({report.trials} trials)")
    ax.tick_params(axis="x", rotation=20)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
