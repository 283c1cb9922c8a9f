"""Two-state Markov packet-loss model and mask handling.

The chain has states N (no loss, emits 1) and L (loss, emits 0) with
self-transition probabilities p_noloss and p_loss.  Sampling starts in N and
the start state is the first emitted symbol, so masks always begin with 1;
afterwards the chain transitions T-1 times.  Sojourn times are geometric,
giving bursty losses with mean burst length 1/(1 - p_loss).

Masks are reproducible across platforms: randomness comes from numpy's
PCG64 generator (a named, documented 64-bit algorithm) seeded explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .framing import FrameSequence


@dataclass
class MarkovLossModel:
    """Self-transition probabilities: p_loss for state L, p_noloss for N."""

    p_loss: float
    p_noloss: float

    def __post_init__(self):
        for name, p in (("p_loss", self.p_loss), ("p_noloss", self.p_noloss)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")


def sample_mask(model: MarkovLossModel, num_frames: int, rng) -> np.ndarray:
    """Sample a binary mask of length ``num_frames`` (1 received, 0 lost)."""
    if num_frames < 1:
        raise ValueError(f"mask length must be >= 1, got {num_frames}")
    rng = np.random.default_rng(rng)
    draws = rng.random(num_frames - 1)
    mask = np.empty(num_frames, dtype=np.int8)
    state = 1
    mask[0] = state
    for t in range(1, num_frames):
        stay = model.p_noloss if state == 1 else model.p_loss
        if draws[t - 1] >= stay:
            state = 1 - state
        mask[t] = state
    return mask


def expected_drop_rate(model: MarkovLossModel) -> float:
    """Stationary probability of the loss state."""
    leave_n = 1.0 - model.p_noloss
    leave_l = 1.0 - model.p_loss
    if leave_n == 0.0 and leave_l == 0.0:
        raise ValueError(
            "p_loss = p_noloss = 1 has no unique stationary distribution"
        )
    return leave_n / (leave_n + leave_l)


def apply_mask(seq: FrameSequence, mask: np.ndarray) -> FrameSequence:
    """Zero out the lost frames; received frames are untouched."""
    mask = np.asarray(mask)
    if len(mask) != seq.num_frames:
        raise ValueError(
            f"mask length {len(mask)} != frame count {seq.num_frames}"
        )
    frames = np.where(mask[:, None].astype(bool), seq.frames, 0.0)
    return FrameSequence(frames=frames, sample_rate=seq.sample_rate, length=seq.length)


# -- mask sidecar files -------------------------------------------------------


def format_mask(mask: np.ndarray) -> str:
    return "".join("1" if m else "0" for m in mask)


def write_mask_file(
    path: str | Path,
    masks: list[np.ndarray] | np.ndarray,
    model: MarkovLossModel | None = None,
    seed: int | None = None,
) -> None:
    """One mask per line of '0'/'1' characters, with an optional '#' header."""
    if isinstance(masks, np.ndarray) and masks.ndim == 1:
        masks = [masks]
    lines = []
    if model is not None:
        header = f"#frames={len(masks[0])} p_L={model.p_loss} p_N={model.p_noloss}"
        if seed is not None:
            header += f" seed={seed}"
        lines.append(header)
    lines.extend(format_mask(m) for m in masks)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_mask_file(path: str | Path) -> list[np.ndarray]:
    """Parse a mask file, skipping '#' header lines."""
    masks = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if set(line) - {"0", "1"}:
            raise ValueError(f"{path}:{lineno}: mask lines must be only '0'/'1'")
        masks.append(np.array([int(c) for c in line], dtype=np.int8))
    return masks
