"""Reference concealment strategies: zero substitution and linear interpolation.

Both preserve received frames bit-exactly and are idempotent for a fixed
mask.  Linear interpolation joins the last sample before each loss run to
the first sample after it; gaps at the signal edges hold the single
available anchor, and a fully lost signal becomes silence.
"""

from __future__ import annotations

import numpy as np

from .framing import FrameSequence
from .lossmodel import apply_mask


def zero_fill(seq: FrameSequence, mask: np.ndarray) -> FrameSequence:
    """Replace every lost frame with zeros."""
    return apply_mask(seq, mask)


def _loss_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs of lost frames as [start, end) index pairs."""
    runs = []
    start = None
    for t, m in enumerate(mask):
        if m == 0 and start is None:
            start = t
        elif m == 1 and start is not None:
            runs.append((start, t))
            start = None
    if start is not None:
        runs.append((start, len(mask)))
    return runs


def linear_interp(seq: FrameSequence, mask: np.ndarray) -> FrameSequence:
    """Fill each loss run with the line joining its neighboring samples.

    For a run of g lost samples between anchors a (last received sample
    before) and b (first received sample after), sample k of the gap gets
    a + (b - a) * k / (g + 1) for k = 1..g.
    """
    mask = np.asarray(mask)
    if len(mask) != seq.num_frames:
        raise ValueError(
            f"mask length {len(mask)} != frame count {seq.num_frames}"
        )
    frames = seq.frames.copy()
    frame_len = seq.frame_len
    flat = frames.reshape(-1)
    for start, end in _loss_runs(mask):
        lo = start * frame_len
        hi = end * frame_len
        g = hi - lo
        a = flat[lo - 1] if start > 0 else None
        b = flat[hi] if end < len(mask) else None
        if a is None and b is None:
            fill = np.zeros(g)
        elif a is None:
            fill = np.full(g, b)
        elif b is None:
            fill = np.full(g, a)
        else:
            k = np.arange(1, g + 1)
            fill = a + (b - a) * k / (g + 1)
        flat[lo:hi] = fill
    return FrameSequence(frames=frames, sample_rate=seq.sample_rate, length=seq.length)
