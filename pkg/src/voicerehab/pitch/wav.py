"""16-bit mono WAV ingestion and frame slicing."""
from __future__ import annotations

import wave

import numpy as np

from ..errors import FrameError
from .types import DEFAULT_FRAME_SIZE, DEFAULT_HOP, AudioFrame


def read_wav_mono(path) -> tuple[np.ndarray, int]:
    """Read a RIFF WAV file as float64 samples in [-1, 1] plus sample rate.

    Only 16-bit signed little-endian mono PCM is accepted.
    """
    with wave.open(str(path), "rb") as wf:
        if wf.getnchannels() != 1:
            raise FrameError(f"expected mono WAV, got {wf.getnchannels()} channels")
        if wf.getsampwidth() != 2:
            raise FrameError(f"expected 16-bit PCM, got {wf.getsampwidth() * 8}-bit")
        raw = wf.readframes(wf.getnframes())
        rate = wf.getframerate()
    samples = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0
    return samples, rate


def write_wav_mono(path, samples: np.ndarray, sample_rate: int) -> None:
    """Write float samples in [-1, 1] as 16-bit mono PCM."""
    pcm = np.clip(np.asarray(samples) * 32767.0, -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(sample_rate)
        wf.writeframes(pcm.tobytes())


def frames_from_samples(
    samples: np.ndarray,
    sample_rate: int,
    frame_size: int = DEFAULT_FRAME_SIZE,
    hop: int = DEFAULT_HOP,
    t0_ms: float = 0.0,
) -> list[AudioFrame]:
    """Slice a sample buffer into hop-spaced frames.

    Frame i starts at sample i * hop; trailing samples shorter than one
    frame are dropped. t_start of frame i is t0_ms + i * hop / rate * 1000.
    """
    samples = np.asarray(samples, dtype=np.float64)
    n = len(samples)
    if n < frame_size:
        return []
    count = (n - frame_size) // hop + 1
    return [
        AudioFrame(
            samples=samples[i * hop : i * hop + frame_size],
            sample_rate=sample_rate,
            t_start=t0_ms + i * hop / sample_rate * 1000.0,
        )
        for i in range(count)
    ]
