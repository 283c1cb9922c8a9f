"""Mono 16-bit PCM WAV reading and writing.

Samples are normalized to [-1, 1) by dividing by 32768 on read.  Writing
scales by 32768 and clamps to the int16 range, which makes a read/write
round trip preserve the PCM payload bit-exactly (32767 would not).  No
implicit resampling: a sample-rate mismatch is the caller's error to surface.
"""

from __future__ import annotations

import wave
from pathlib import Path

import numpy as np

from .framing import AudioSignal

PCM_SCALE = 32768.0


def read_wav(path: str | Path) -> AudioSignal:
    """Read a mono 16-bit PCM WAV file into a normalized signal."""
    with wave.open(str(path), "rb") as w:
        channels = w.getnchannels()
        width = w.getsampwidth()
        rate = w.getframerate()
        n = w.getnframes()
        payload = w.readframes(n)
    if channels != 1:
        raise ValueError(f"{path}: expected mono audio, got {channels} channels")
    if width != 2:
        raise ValueError(f"{path}: expected 16-bit PCM, got {8 * width}-bit")
    pcm = np.frombuffer(payload, dtype="<i2")
    return AudioSignal(pcm.astype(np.float64) / PCM_SCALE, sample_rate=rate)


def write_wav(path: str | Path, signal: AudioSignal) -> None:
    """Write a normalized signal as mono 16-bit PCM."""
    pcm = np.rint(signal.samples * PCM_SCALE)
    pcm = np.clip(pcm, -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(signal.sample_rate)
        w.writeframes(pcm.tobytes())
