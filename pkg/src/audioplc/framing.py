"""Audio containers and the frame/unframe transform.

A signal is cut into consecutive non-overlapping frames of ``frame_len``
samples; a trailing remainder is zero-padded into a final frame and the true
sample count is kept so unframing is an exact inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class AudioSignal:
    """Mono sample sequence in [-1, 1] with its sample rate."""

    samples: np.ndarray
    sample_rate: int = 16000

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValueError(f"signal must be mono 1-d, got shape {self.samples.shape}")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass
class FrameSequence:
    """Signal partitioned into (num_frames, frame_len) rows.

    ``length`` is the true pre-padding sample count used by ``unframe``.
    """

    frames: np.ndarray
    sample_rate: int
    length: int

    def __post_init__(self):
        self.frames = np.asarray(self.frames, dtype=np.float64)
        if self.frames.ndim != 2:
            raise ValueError(f"frames must be 2-d, got shape {self.frames.shape}")

    @property
    def num_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def frame_len(self) -> int:
        return self.frames.shape[1]


def frame_signal(signal: AudioSignal, frame_len: int) -> FrameSequence:
    """Partition a signal into consecutive frames, zero-padding the tail."""
    if frame_len < 2:
        raise ValueError(f"frame_len must be >= 2, got {frame_len}")
    n = len(signal.samples)
    if n == 0:
        raise ValueError("cannot frame an empty signal")
    num_frames = -(-n // frame_len)
    padded = np.zeros(num_frames * frame_len)
    padded[:n] = signal.samples
    return FrameSequence(
        frames=padded.reshape(num_frames, frame_len),
        sample_rate=signal.sample_rate,
        length=n,
    )


def unframe(seq: FrameSequence) -> AudioSignal:
    """Exact inverse of frame_signal: concatenate frames, drop the padding."""
    flat = seq.frames.reshape(-1)[:seq.length]
    return AudioSignal(samples=flat.copy(), sample_rate=seq.sample_rate)
