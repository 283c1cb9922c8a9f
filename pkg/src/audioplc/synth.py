"""Deterministic synthetic audio so every workflow runs with zero external data.

Tracks are amplitude- and frequency-modulated sines with a little seeded
noise: periodic enough for a small predictor to learn, modulated enough not
to be trivially constant.
"""

from __future__ import annotations

import numpy as np

from .framing import AudioSignal


def modulated_sine(
    duration: float,
    sample_rate: int = 16000,
    base_freq: float = 440.0,
    am_freq: float = 2.0,
    fm_freq: float = 0.5,
    fm_depth: float = 10.0,
    amplitude: float = 0.7,
    noise_level: float = 1e-3,
    seed: int = 0,
) -> AudioSignal:
    """One AM/FM-modulated sine track with low-level seeded noise."""
    rng = np.random.default_rng(seed)
    n = int(round(duration * sample_rate))
    t = np.arange(n) / sample_rate
    envelope = 0.75 + 0.25 * np.sin(2 * np.pi * am_freq * t)
    phase = 2 * np.pi * (base_freq * t + (fm_depth / (2 * np.pi * fm_freq))
                         * np.sin(2 * np.pi * fm_freq * t))
    samples = amplitude * envelope * np.sin(phase)
    samples = samples + noise_level * rng.standard_normal(n)
    return AudioSignal(np.clip(samples, -1.0, 1.0), sample_rate)


def sine_corpus(
    n_tracks: int,
    duration: float,
    sample_rate: int = 16000,
    seed: int = 0,
) -> list[AudioSignal]:
    """A small corpus of 440 Hz modulated sines, phases varied per track."""
    tracks = []
    for i in range(n_tracks):
        tracks.append(
            modulated_sine(
                duration,
                sample_rate=sample_rate,
                am_freq=2.0 + 0.3 * i,
                fm_freq=0.5 + 0.1 * i,
                seed=seed + i,
            )
        )
    return tracks
