"""Matplotlib rendering for the bound curves (and simulation histograms)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bounds import BoundCurve  # noqa: E402

RC = {
    "font.size": 10,
    "axes.labelsize": 11,
    "legend.fontsize": 9,
    "lines.linewidth": 1.5,
    "svg.hashsalt": "advlab",
    "svg.fonttype": "none",
}


def plot_bound_curve(curve: BoundCurve, path: str | Path, width: float = 5.0) -> Path:
    """Both curves of the capacity figure: BSC capacity and the strong-adversary bound."""
    path = Path(path)
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(width, width * 0.68))
        ax.plot(curve.grid, curve.bsc_capacity, "--", color="0.4", label=r"$1-h_B(p)$ (BSC)")
        ax.plot(curve.grid, curve.strong_adv_upper, color="C3", label="strong adversary upper bound")
        ax.axvline(0.25, color="0.8", lw=0.8, zorder=0)
        ax.set_xlim(0, 0.5)
        ax.set_ylim(0, 1)
        ax.set_xlabel("p")
        ax.set_ylabel("rate")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path, metadata={"Date": None} if path.suffix == ".svg" else None)
        plt.close(fig)
    return path


def plot_weight_histogram(hist: dict[int, int] | list[int], n: int, p: float, path: str | Path) -> Path:
    path = Path(path)
    if isinstance(hist, dict):
        counts = [hist.get(w, 0) for w in range(n + 1)]
    else:
        counts = list(hist)
    total = sum(counts) or 1
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5.0, 3.4))
        ax.bar([w / n for w in range(n + 1)], [k / total for k in counts], width=1 / n, color="C0")
        ax.axvline(p, color="C3", lw=1, label=f"p = {p:g}")
        ax.set_xlabel("wt(e)/n")
        ax.set_ylabel("frequency")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path, metadata={"Date": None} if path.suffix == ".svg" else None)
        plt.close(fig)
    return path
