"""Recurrent concealment wrapper around a next-frame predictor cell.

Each step receives a frame and its received/lost flag.  Received frames pass
through untouched; lost frames are replaced by the prediction the wrapped
cell made one step earlier.  Either way the (possibly repaired) frame is fed
to the cell to produce the prediction held for the next step:

    y_t        = x_t            if M_t = 1 else  x_hat_t
    x_hat_{t+1}, s_t = R(y_t, s_{t-1})

The initial pending prediction is the zero frame, so leading losses produce
silence.  A stream owns its state and is single-threaded; many streams may
share the read-only cell parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .nn.layers import StackedCellParams, stacked_step

# A predictor cell: (frame, state) -> (predicted next frame, next state).
CellFn = Callable[[np.ndarray, object], tuple[np.ndarray, object]]


@dataclass
class ConcealState:
    """Wrapper state: the prediction pending for the next step + cell state."""

    pending: np.ndarray
    inner: object


def _as_cell(cell) -> tuple[CellFn, Callable[[], object], int]:
    """Accept StackedCellParams or a bare (frame, state) -> ... callable."""
    if isinstance(cell, StackedCellParams):
        return (
            lambda frame, state: stacked_step(cell, frame, state),
            cell.zero_states,
            cell.frame_len,
        )
    if callable(cell):
        return cell, lambda: None, -1
    raise TypeError(f"not a predictor cell: {cell!r}")


def initial_state(cell, frame_len: int | None = None) -> ConcealState:
    """z_0: zero pending prediction and zero inner cell state."""
    step, zero_inner, cell_frame_len = _as_cell(cell)
    if frame_len is None:
        if cell_frame_len < 0:
            raise ValueError("frame_len required for a callable cell")
        frame_len = cell_frame_len
    return ConcealState(pending=np.zeros(frame_len), inner=zero_inner())


def conceal_step(
    cell,
    frame: np.ndarray,
    received: int,
    state: ConcealState,
) -> tuple[np.ndarray, ConcealState]:
    """One concealment step; returns the output frame and the next state."""
    if received not in (0, 1):
        raise ValueError(f"mask flag must be 0 or 1, got {received!r}")
    frame = np.asarray(frame, dtype=np.float64)
    if frame.shape != state.pending.shape:
        raise ValueError(
            f"frame shape {frame.shape} != pending {state.pending.shape}"
        )
    step, _, _ = _as_cell(cell)
    out = frame if received == 1 else state.pending
    pending, inner = step(out, state.inner)
    return out, ConcealState(pending=np.asarray(pending), inner=inner)


class StreamingConcealer:
    """Stateful frame-in/frame-out interface for real-time use."""

    def __init__(self, cell, frame_len: int | None = None):
        self._cell = cell
        self._state = initial_state(cell, frame_len)

    @property
    def frame_len(self) -> int:
        return len(self._state.pending)

    def step(self, frame: np.ndarray, received: int) -> np.ndarray:
        out, self._state = conceal_step(self._cell, frame, received, self._state)
        return out

    def reset(self) -> None:
        self._state = initial_state(self._cell, self.frame_len)


def conceal_sequence(cell, frames: np.ndarray, mask: Sequence[int]) -> np.ndarray:
    """Run the streaming concealer over a whole framed signal."""
    frames = np.asarray(frames, dtype=np.float64)
    mask = np.asarray(mask)
    if len(mask) != len(frames):
        raise ValueError(f"mask length {len(mask)} != frame count {len(frames)}")
    stream = StreamingConcealer(cell, frames.shape[1] if frames.ndim == 2 else None)
    return np.asarray([stream.step(f, int(m)) for f, m in zip(frames, mask)])


def conceal_bidirectional(
    cell_fwd,
    cell_bwd,
    frames: np.ndarray,
    mask: Sequence[int],
) -> np.ndarray:
    """Average a forward pass with a time-reversed pass of a backward model.

    The backward model is trained on time-reversed audio, so its pass sees
    the full time reversal (frame order and samples within frames) and its
    output is reversed back before averaging.  Non-lost frames equal the
    input in both passes, so they are preserved exactly.  Not streamable.
    """
    frames = np.asarray(frames, dtype=np.float64)
    mask = np.asarray(mask)
    fwd = conceal_sequence(cell_fwd, frames, mask)
    bwd_rev = conceal_sequence(cell_bwd, frames[::-1, ::-1], mask[::-1])
    bwd = bwd_rev[::-1, ::-1]
    return 0.5 * (fwd + bwd)
