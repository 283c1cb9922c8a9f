"""Matplotlib rendering for evaluation reports and concealment examples."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .evaluate import EvalRow

STRATEGY_STYLE = {
    "zero": dict(color="tab:gray", marker="s", label="0-substitution"),
    "interp": dict(color="tab:orange", marker="^", label="linear interp"),
    "forward": dict(color="tab:blue", marker="o", label="forward"),
    "bidir": dict(color="tab:green", marker="D", label="bidirectional"),
}


def render_report_figure(rows: Sequence[EvalRow], path: str | Path) -> Path:
    """CCC vs. drop-rate curves, one line per concealment strategy."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    drops = [r.drop_pct for r in rows]
    strategies = list(rows[0].ccc_pct) if rows else []
    for s in strategies:
        style = STRATEGY_STYLE.get(s, dict(marker="x", label=s))
        ax.plot(drops, [r.ccc_pct[s] for r in rows], linestyle="-", **style)
    ax.set_xlabel("frame drop rate [%]")
    ax.set_ylabel("CCC of concealed vs. original audio [%]")
    ax.set_title("Concealment quality across loss regimes")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_waveform_figure(
    original: np.ndarray,
    concealed: dict[str, np.ndarray],
    sample_rate: int,
    path: str | Path,
    window: tuple[int, int] | None = None,
) -> Path:
    """Overlay a stretch of original audio with concealed reconstructions."""
    path = Path(path)
    lo, hi = window if window is not None else (0, len(original))
    t = np.arange(lo, hi) / sample_rate * 1000.0
    fig, ax = plt.subplots(figsize=(9, 3.5))
    ax.plot(t, original[lo:hi], color="black", linewidth=1.2, label="original")
    for name, samples in concealed.items():
        style = STRATEGY_STYLE.get(name, dict(label=name))
        ax.plot(t, samples[lo:hi], linewidth=0.9, alpha=0.8,
                color=style.get("color"), label=style.get("label", name))
    ax.set_xlabel("time [ms]")
    ax.set_ylabel("amplitude")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
