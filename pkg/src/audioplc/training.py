"""Two-phase trainer for the frame predictor.

Phase one optimizes the plain next-frame CCC loss; phase two continues with
the stressed multi-depth loss at a lower learning rate.  Adam runs with a
time-based learning-rate decay lr_t = lr / (1 + decay * t) where t counts
completed optimizer updates within the phase.  Each 20 s track segment is one
training example (batch size 1); segment order is reshuffled every epoch with
the seeded RNG, so a run is fully determined by its seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .framing import AudioSignal, frame_signal
from .generator import DropoutPlan, GeneratorConfig, stressed_loss
from .nn.layers import StackedCellParams, lift_params, map_params, named_params
from .nn.tape import backward


@dataclass
class TrainConfig:
    """Optimizer schedule and regularization knobs."""

    epochs_plain: int = 80
    epochs_stress: int = 40
    lr_plain: float = 0.0045
    lr_stress: float = 0.003
    lr_decay: float = 0.0015
    dropout_rate: float = 0.5
    stress_depth: int = 3
    segment_seconds: float = 20.0
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    rng_seed: int = 0

    def __post_init__(self):
        if self.stress_depth < 1:
            raise ValueError("stress_depth must be >= 1")
        if self.lr_plain <= 0 or self.lr_stress <= 0:
            raise ValueError("learning rates must be positive")


class Adam:
    """Adam with optional time-based learning-rate decay."""

    def __init__(self, lr: float, beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-8, decay: float = 0.0):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.decay = decay
        self.t = 0
        self.m: list[np.ndarray] | None = None
        self.v: list[np.ndarray] | None = None

    def step(self, params: Sequence[np.ndarray],
             grads: Sequence[np.ndarray | None]) -> list[np.ndarray]:
        """Return updated copies of ``params`` (inputs left untouched)."""
        if self.m is None:
            self.m = [np.zeros_like(p) for p in params]
            self.v = [np.zeros_like(p) for p in params]
        lr_t = self.lr / (1.0 + self.decay * self.t)
        self.t += 1
        out = []
        for i, (p, g) in enumerate(zip(params, grads)):
            if g is None:
                g = np.zeros_like(p)
            self.m[i] = self.beta1 * self.m[i] + (1 - self.beta1) * g
            self.v[i] = self.beta2 * self.v[i] + (1 - self.beta2) * g * g
            m_hat = self.m[i] / (1 - self.beta1 ** self.t)
            v_hat = self.v[i] / (1 - self.beta2 ** self.t)
            out.append(p - lr_t * m_hat / (np.sqrt(v_hat) + self.eps))
        return out


@dataclass
class EpochStats:
    phase: str
    loss: float


def segment_tracks(
    dataset: Sequence[AudioSignal],
    frame_len: int,
    segment_seconds: float,
    min_frames: int,
) -> list[np.ndarray]:
    """Frame every track and cut it into fixed-duration frame blocks."""
    segments = []
    for track in dataset:
        seq = frame_signal(track, frame_len)
        per_seg = max(min_frames, int(round(segment_seconds * seq.sample_rate / frame_len)))
        for start in range(0, seq.num_frames, per_seg):
            block = seq.frames[start:start + per_seg]
            if len(block) >= min_frames:
                segments.append(block)
    return segments


def train(
    dataset: Sequence[AudioSignal],
    gen_config: GeneratorConfig,
    train_config: TrainConfig,
    progress: Callable[[int, str, float], None] | None = None,
) -> tuple[StackedCellParams, list[EpochStats]]:
    """Run both training phases; returns final parameters and loss history."""
    if not dataset:
        raise ValueError("training dataset is empty")
    cfg = train_config
    min_frames = max(2, cfg.stress_depth + 1 if cfg.epochs_stress > 0 else 2)
    segments = segment_tracks(dataset, gen_config.frame_len,
                              cfg.segment_seconds, min_frames)
    if not segments:
        raise ValueError(
            f"no usable segments: every track needs >= {min_frames} frames"
        )

    init_ss, shuffle_ss, dropout_ss = np.random.SeedSequence(cfg.rng_seed).spawn(3)
    params = gen_config.build(np.random.default_rng(init_ss))
    shuffle_rng = np.random.default_rng(shuffle_ss)
    dropout_rng = np.random.default_rng(dropout_ss)

    history: list[EpochStats] = []
    phases = [
        ("plain", cfg.epochs_plain, cfg.lr_plain, 1),
        ("stress", cfg.epochs_stress, cfg.lr_stress, cfg.stress_depth),
    ]
    for phase, epochs, lr, depth in phases:
        if epochs == 0:
            continue
        adam = Adam(lr, cfg.beta1, cfg.beta2, cfg.adam_eps, cfg.lr_decay)
        for epoch in range(epochs):
            order = shuffle_rng.permutation(len(segments))
            losses = []
            for idx in order:
                params, loss = _train_step(params, segments[idx], depth,
                                           cfg, adam, dropout_rng)
                losses.append(loss)
            stats = EpochStats(phase=phase, loss=float(np.mean(losses)))
            history.append(stats)
            if progress is not None:
                progress(len(history), phase, stats.loss)
    return params, history


def _train_step(
    params: StackedCellParams,
    seg_frames: np.ndarray,
    depth: int,
    cfg: TrainConfig,
    adam: Adam,
    dropout_rng,
) -> tuple[StackedCellParams, float]:
    lifted = lift_params(params)
    dropout = DropoutPlan(cfg.dropout_rate, dropout_rng) if cfg.dropout_rate > 0 else None
    loss = stressed_loss(lifted, seg_frames, depth, dropout=dropout)
    if not np.isfinite(loss.value):
        raise RuntimeError(
            f"non-finite loss {loss.value!r} at optimizer step {adam.t + 1} "
            f"(depth {depth}); aborting"
        )
    backward(loss)
    leaves = [arr for _, arr in named_params(lifted)]
    grads = [leaf.grad for leaf in leaves]
    arrays = [arr for _, arr in named_params(params)]
    updated = adam.step(arrays, grads)
    it = iter(updated)
    new_params = map_params(params, lambda _: next(it))
    return new_params, float(loss.value)
