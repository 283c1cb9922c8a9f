"""The generative frame predictor: configuration, sequence runs, stressed loss.

The predictor consumes frames x_1..x_{T-1} teacher-forced and emits one
prediction per input frame, y_t ~ x_{t+1}.  Stressed training additionally
feeds the model its own full output sequence ``depth`` times and mixes the
per-depth CCC losses with weights 2^(i-1)/(2^d - 1), hardening free-running
generation over bursts of consecutive losses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .metrics import ccc_loss
from .nn.layers import StackedCellParams, dropout_mask, init_stacked, stacked_step
from .nn.tape import Tensor, concat


@dataclass
class GeneratorConfig:
    """Architecture of the frame predictor."""

    frame_len: int = 100
    lstm_units: tuple[int, ...] = (768, 768)
    dense_units: tuple[int, ...] = (256, 100)
    sample_rate: int = 16000

    def __post_init__(self):
        self.lstm_units = tuple(self.lstm_units)
        self.dense_units = tuple(self.dense_units)
        if self.frame_len < 2:
            raise ValueError(f"frame_len must be >= 2, got {self.frame_len}")
        if self.dense_units[-1] != self.frame_len:
            raise ValueError(
                f"last dense width {self.dense_units[-1]} must equal "
                f"frame_len {self.frame_len}"
            )

    def build(self, rng) -> StackedCellParams:
        return init_stacked(self.frame_len, self.lstm_units, self.dense_units, rng)


class DropoutPlan:
    """Draws one inverted-dropout mask per LSTM layer per time step."""

    def __init__(self, rate: float, rng):
        if not 0.0 <= rate < 1.0:
            raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
        self.rate = rate
        self.rng = np.random.default_rng(rng)

    def layer_masks(self, cell: StackedCellParams) -> list[np.ndarray]:
        return [dropout_mask(self.rate, l.hidden, self.rng) for l in cell.lstm]


def _predict(
    params: StackedCellParams,
    inputs: Sequence,
    dropout: DropoutPlan | None = None,
) -> list:
    """Teacher-forced pass: one prediction per input frame, states threaded."""
    states = params.zero_states()
    preds = []
    for frame in inputs:
        masks = dropout.layer_masks(params) if dropout is not None else None
        pred, states = stacked_step(params, frame, states, layer_masks=masks)
        preds.append(pred)
    return preds


def _stack(preds: list):
    if any(isinstance(p, Tensor) for p in preds):
        return preds
    return np.asarray(preds)


def generate_sequence(params: StackedCellParams, inputs, dropout: DropoutPlan | None = None):
    """Predict the successor of every input frame.

    ``inputs`` are the frames x_1..x_{T-1} as an (N, frame_len) array; the
    result has the same shape, row t predicting x_{t+2-1}'s successor.
    """
    if len(inputs) < 1:
        raise ValueError("need at least one input frame (T >= 2)")
    return _stack(_predict(params, inputs, dropout))


def compose_generate(
    params: StackedCellParams,
    inputs,
    depth: int,
    dropout: DropoutPlan | None = None,
):
    """Apply the predictor ``depth`` times, feeding each full output back in."""
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if len(inputs) < depth:
        raise ValueError(
            f"sequence too short for depth {depth}: need more than {depth} "
            f"frames, got {len(inputs) + 1}"
        )
    seq = inputs
    for _ in range(depth):
        seq = _predict(params, seq, dropout)
    return _stack(seq)


def stress_weights(depth: int) -> np.ndarray:
    """Loss mix 2^(i-1)/(2^d - 1) for i = 1..d; always sums to 1."""
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    i = np.arange(1, depth + 1)
    return 2.0 ** (i - 1) / (2.0 ** depth - 1.0)


def stressed_loss(
    params: StackedCellParams,
    frames,
    depth: int,
    dropout: DropoutPlan | None = None,
):
    """Weighted multi-depth CCC loss over the whole frame sequence x_1..x_T.

    Depth i compares the i-fold composition output y^(i) against the frames
    x_{i+1}..x_T, both flattened to one sample sequence before the CCC.
    """
    frames = frames if isinstance(frames, np.ndarray) else np.asarray(frames)
    T = len(frames)
    if T <= depth:
        raise ValueError(f"need more than depth={depth} frames, got T={T}")
    weights = stress_weights(depth)
    seq = list(frames[:-1])
    loss = 0.0
    for i in range(1, depth + 1):
        seq = _predict(params, seq, dropout)
        target = frames[i:].reshape(-1)
        predicted = concat(seq[: T - i])
        loss = loss + weights[i - 1] * ccc_loss(target, predicted)
    return loss


def free_run(params: StackedCellParams, seed_frames: np.ndarray, n_frames: int) -> np.ndarray:
    """Prime on real frames, then roll out feeding predictions back in.

    This is what effectively happens inside a burst of consecutive losses.
    """
    if len(seed_frames) < 1:
        raise ValueError("need at least one seed frame")
    states = params.zero_states()
    pred = None
    for frame in seed_frames:
        pred, states = stacked_step(params, frame, states)
    out = []
    for _ in range(n_frames):
        out.append(pred)
        pred, states = stacked_step(params, pred, states)
    return np.asarray(out)
