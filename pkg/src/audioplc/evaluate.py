"""Concealment quality sweep over packet-loss regimes.

For every (p_loss, p_noloss) pair the harness samples masks, corrupts each
track, runs the requested concealment strategies and scores the concealed
audio against the original with CCC over the full sample sequence.  Scores
are averaged over tracks and trials and reported as percentages, one row per
regime, sorted by empirical drop rate.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

from .baselines import linear_interp, zero_fill
from .conceal import conceal_bidirectional, conceal_sequence
from .framing import AudioSignal, FrameSequence, frame_signal, unframe
from .lossmodel import MarkovLossModel, apply_mask, sample_mask
from .metrics import ccc

import numpy as np

STRATEGIES = ("zero", "interp", "forward", "bidir")

# The nine loss regimes of the standard sweep.
DEFAULT_PAIRS: tuple[tuple[float, float], ...] = (
    (0.1, 0.9), (0.5, 0.9), (0.1, 0.5),
    (0.1, 0.1), (0.5, 0.5), (0.9, 0.9),
    (0.5, 0.1), (0.9, 0.5), (0.9, 0.1),
)

CSV_HEADER = ("p_L", "p_N", "drop_pct", "strategy", "ccc_pct", "trials")


@dataclass
class EvalGridSpec:
    """What to sweep: regimes, strategies, trials per regime, mask seeding."""

    pairs: tuple[tuple[float, float], ...] = DEFAULT_PAIRS
    strategies: tuple[str, ...] = STRATEGIES
    trials: int = 1
    base_seed: int = 0
    frame_len: int = 100

    def __post_init__(self):
        self.pairs = tuple((float(pl), float(pn)) for pl, pn in self.pairs)
        self.strategies = tuple(self.strategies)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.strategies:
            raise ValueError("need at least one strategy")
        unknown = set(self.strategies) - set(STRATEGIES)
        if unknown:
            raise ValueError(f"unknown strategies: {sorted(unknown)}")


@dataclass
class EvalRow:
    """Aggregated scores for one loss regime."""

    p_loss: float
    p_noloss: float
    drop_pct: float
    ccc_pct: dict[str, float] = field(default_factory=dict)
    trials: int = 1

    def __post_init__(self):
        if not 0.0 <= self.drop_pct <= 100.0:
            raise ValueError(f"drop_pct out of range: {self.drop_pct}")
        for name, v in self.ccc_pct.items():
            if not -100.0 - 1e-6 <= v <= 100.0 + 1e-6:
                raise ValueError(f"ccc_pct[{name}] out of range: {v}")


def _conceal_with(
    strategy: str,
    lossy: FrameSequence,
    mask: np.ndarray,
    model_fwd,
    model_bwd,
) -> FrameSequence:
    if strategy == "zero":
        return zero_fill(lossy, mask)
    if strategy == "interp":
        return linear_interp(lossy, mask)
    if strategy == "forward":
        if model_fwd is None:
            raise ValueError("strategy 'forward' needs a trained forward model")
        frames = conceal_sequence(model_fwd, lossy.frames, mask)
    elif strategy == "bidir":
        if model_fwd is None or model_bwd is None:
            raise ValueError("strategy 'bidir' needs forward and backward models")
        frames = conceal_bidirectional(model_fwd, model_bwd, lossy.frames, mask)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return FrameSequence(frames=frames, sample_rate=lossy.sample_rate, length=lossy.length)


def evaluate_tracks(
    signals: Sequence[AudioSignal],
    grid: EvalGridSpec,
    model_fwd=None,
    model_bwd=None,
) -> list[EvalRow]:
    """Run the full sweep; one row per (p_loss, p_noloss) pair."""
    if not signals:
        raise ValueError("no tracks to evaluate")
    rows = []
    for p_loss, p_noloss in grid.pairs:
        model = MarkovLossModel(p_loss=p_loss, p_noloss=p_noloss)
        scores: dict[str, list[float]] = {s: [] for s in grid.strategies}
        drops = []
        for trial in range(grid.trials):
            for signal in signals:
                seq = frame_signal(signal, grid.frame_len)
                mask = sample_mask(model, seq.num_frames, grid.base_seed + trial)
                drops.append(1.0 - float(np.mean(mask)))
                lossy = apply_mask(seq, mask)
                for strategy in grid.strategies:
                    fixed = _conceal_with(strategy, lossy, mask, model_fwd, model_bwd)
                    score = ccc(signal.samples, unframe(fixed).samples)
                    scores[strategy].append(100.0 * score)
        rows.append(
            EvalRow(
                p_loss=p_loss,
                p_noloss=p_noloss,
                drop_pct=100.0 * float(np.mean(drops)),
                ccc_pct={s: float(np.mean(v)) for s, v in scores.items()},
                trials=grid.trials,
            )
        )
    rows.sort(key=lambda r: r.drop_pct)
    return rows


def evaluate_track(
    signal: AudioSignal,
    grid: EvalGridSpec,
    model_fwd=None,
    model_bwd=None,
) -> list[EvalRow]:
    return evaluate_tracks([signal], grid, model_fwd, model_bwd)


# -- reports ------------------------------------------------------------------


def render_csv(rows: Sequence[EvalRow]) -> str:
    """Long-form CSV, full float precision so parsing is lossless."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        for strategy, value in row.ccc_pct.items():
            writer.writerow(
                [repr(row.p_loss), repr(row.p_noloss), repr(row.drop_pct),
                 strategy, repr(value), row.trials]
            )
    return out.getvalue()


def parse_csv(text: str) -> list[EvalRow]:
    """Inverse of render_csv."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is not None and tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header: {header}")
    rows: list[EvalRow] = []
    for rec in reader:
        if not rec:
            continue
        p_l, p_n, drop, strategy, value, trials = rec
        key = (float(p_l), float(p_n), float(drop), int(trials))
        if not rows or (rows[-1].p_loss, rows[-1].p_noloss,
                        rows[-1].drop_pct, rows[-1].trials) != key:
            rows.append(EvalRow(p_loss=key[0], p_noloss=key[1],
                                drop_pct=key[2], ccc_pct={}, trials=key[3]))
        rows[-1].ccc_pct[strategy] = float(value)
    return rows


def render_table(rows: Sequence[EvalRow]) -> str:
    """Human-readable wide table, one regime per line, drop rate ascending."""
    strategies = list(rows[0].ccc_pct) if rows else list(STRATEGIES)
    head = f"{'p_L':>5} {'p_N':>5} {'drop%':>7} | " + " ".join(
        f"{s:>8}" for s in strategies
    )
    lines = [head, "-" * len(head)]
    for row in rows:
        cells = " ".join(f"{row.ccc_pct[s]:8.2f}" for s in strategies)
        lines.append(
            f"{row.p_loss:5.2f} {row.p_noloss:5.2f} {row.drop_pct:7.2f} | {cells}"
        )
    return "\n".join(lines) + "\n"
