"""Synthetic voice-like test signals with known per-frame ground truth.

Dysphonic character is simulated by the standard perturbation triad:
jitter (cycle-to-cycle period perturbation), shimmer (cycle amplitude
perturbation) and breathiness (white noise mixed over the voiced regions
at a given SNR). Rendering is cycle-by-cycle so jitter acts on whole
periods, and fully deterministic for a given seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from ..pitch.types import DEFAULT_FRAME_SIZE, DEFAULT_HOP, DEFAULT_SAMPLE_RATE, AudioFrame

WAVEFORMS = ("sine", "sawtooth", "pulse-train")

TONE_AMPLITUDE = 0.6
SILENCE_CUTOFF_HZ = 1.0


@dataclass(frozen=True)
class SignalSpec:
    """Recipe for one synthetic signal.

    f0_contour is a piecewise-linear sequence of (time_s, hz) breakpoints,
    held constant beyond its endpoints; contour values below 1 Hz mark
    silence. noise_snr_db of None means no added noise.
    """

    waveform: str
    f0_contour: tuple[tuple[float, float], ...]
    duration_s: float
    jitter_pct: float = 0.0
    shimmer_pct: float = 0.0
    noise_snr_db: float | None = None
    seed: int = 0
    sample_rate: int = DEFAULT_SAMPLE_RATE

    def __post_init__(self) -> None:
        if self.waveform not in WAVEFORMS:
            raise ConfigError(f"waveform must be one of {WAVEFORMS}, got {self.waveform!r}")
        contour = tuple((float(t), float(f)) for t, f in self.f0_contour)
        object.__setattr__(self, "f0_contour", contour)
        if not contour:
            raise ConfigError("f0_contour must have at least one breakpoint")
        if any(t2 < t1 for (t1, _), (t2, _) in zip(contour, contour[1:])):
            raise ConfigError("f0_contour breakpoints must be time-ordered")
        if any(f < 0 for _, f in contour):
            raise ConfigError("f0_contour frequencies must be non-negative")
        if max(f for _, f in contour) >= self.sample_rate / 2:
            raise ConfigError("f0_contour exceeds Nyquist")
        if self.duration_s <= 0:
            raise ConfigError("duration_s must be positive")
        if not 0 <= self.jitter_pct <= 20:
            raise ConfigError("jitter_pct must be in [0, 20]")
        if not 0 <= self.shimmer_pct <= 20:
            raise ConfigError("shimmer_pct must be in [0, 20]")

    def to_dict(self) -> dict:
        return {
            "waveform": self.waveform,
            "f0_contour": [[t, f] for t, f in self.f0_contour],
            "duration_s": self.duration_s,
            "jitter_pct": self.jitter_pct,
            "shimmer_pct": self.shimmer_pct,
            "noise_snr_db": self.noise_snr_db,
            "seed": self.seed,
            "sample_rate": self.sample_rate,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SignalSpec":
        return cls(
            waveform=d["waveform"],
            f0_contour=tuple((t, f) for t, f in d["f0_contour"]),
            duration_s=float(d["duration_s"]),
            jitter_pct=float(d.get("jitter_pct", 0.0)),
            shimmer_pct=float(d.get("shimmer_pct", 0.0)),
            noise_snr_db=None if d.get("noise_snr_db") is None else float(d["noise_snr_db"]),
            seed=int(d.get("seed", 0)),
            sample_rate=int(d.get("sample_rate", DEFAULT_SAMPLE_RATE)),
        )


@dataclass(frozen=True)
class FrameTruth:
    """Ground-truth label for one frame: voiced iff more than half of its
    samples come from the tonal contour."""

    voiced: bool
    f0: float | None


def _cycle_wave(waveform: str, phase: np.ndarray, n_harmonics: int) -> np.ndarray:
    if waveform == "sine":
        return np.sin(phase)
    if waveform == "sawtooth":
        return phase / np.pi - 1.0
    acc = np.zeros_like(phase)
    for h in range(1, n_harmonics + 1):
        acc += np.cos(h * phase)
    return acc / n_harmonics


def render_signal(spec: SignalSpec) -> np.ndarray:
    """Render the full sample array for a spec (deterministic given seed)."""
    sr = spec.sample_rate
    n = int(round(spec.duration_s * sr))
    xs = np.array([t for t, _ in spec.f0_contour])
    ys = np.array([f for _, f in spec.f0_contour])
    f_at = np.interp(np.arange(n) / sr, xs, ys)
    voiced = f_at >= SILENCE_CUTOFF_HZ

    if n == 0:
        return np.zeros(0)

    rng = np.random.default_rng(spec.seed)
    max_f = float(ys.max())
    n_harm = max(1, min(20, int(0.45 * sr / max_f))) if max_f > 0 else 1

    out = np.zeros(n)
    edges = np.flatnonzero(np.diff(voiced.astype(np.int8)))
    starts = [0] if voiced[0] else []
    starts += [int(e) + 1 for e in edges if not voiced[e]]
    ends = [int(e) + 1 for e in edges if voiced[e]]
    if voiced[-1]:
        ends.append(n)

    for start, end in zip(starts, ends):
        t_c = float(start)
        while t_c < end:
            f = float(np.interp(t_c / sr, xs, ys))
            if f < SILENCE_CUTOFF_HZ:
                break
            eps = float(np.clip(rng.normal(0.0, spec.jitter_pct / 100.0), -0.5, 0.5))
            delta = float(np.clip(rng.normal(0.0, spec.shimmer_pct / 100.0), -0.5, 0.5))
            period = sr * (1.0 + eps) / f
            i0 = int(np.ceil(t_c))
            i1 = min(int(np.ceil(t_c + period)), end)
            if i1 > i0:
                idx = np.arange(i0, i1)
                phase = 2.0 * np.pi * (idx - t_c) / period
                out[idx] = _cycle_wave(spec.waveform, phase, n_harm) * TONE_AMPLITUDE * (1.0 + delta)
            t_c += period

    if spec.noise_snr_db is not None and voiced.any():
        p_sig = float(np.mean(out[voiced] ** 2))
        if p_sig > 0:
            sigma = np.sqrt(p_sig / 10.0 ** (spec.noise_snr_db / 10.0))
            out[voiced] += rng.normal(0.0, sigma, int(voiced.sum()))

    return np.clip(out, -1.0, 1.0)


def synthesize(
    spec: SignalSpec,
    frame_size: int = DEFAULT_FRAME_SIZE,
    hop: int = DEFAULT_HOP,
) -> tuple[list[AudioFrame], list[FrameTruth]]:
    """Render a spec and slice it into frames with aligned truth labels.

    Truth f0 is the contour value (perturbation-free) at the frame center.
    """
    sr = spec.sample_rate
    samples = render_signal(spec)
    xs = np.array([t for t, _ in spec.f0_contour])
    ys = np.array([f for _, f in spec.f0_contour])
    f_at = np.interp(np.arange(len(samples)) / sr, xs, ys)
    voiced = f_at >= SILENCE_CUTOFF_HZ

    frames: list[AudioFrame] = []
    truth: list[FrameTruth] = []
    n = len(samples)
    if n < frame_size:
        return frames, truth
    count = (n - frame_size) // hop + 1
    for i in range(count):
        lo = i * hop
        hi = lo + frame_size
        frames.append(
            AudioFrame(samples=samples[lo:hi], sample_rate=sr, t_start=lo / sr * 1000.0)
        )
        frame_voiced = bool(np.mean(voiced[lo:hi]) > 0.5)
        if not frame_voiced:
            truth.append(FrameTruth(voiced=False, f0=None))
            continue
        center = lo + frame_size // 2
        if voiced[center]:
            f0 = float(f_at[center])
        else:
            f0 = float(np.mean(f_at[lo:hi][voiced[lo:hi]]))
        truth.append(FrameTruth(voiced=True, f0=f0))
    return frames, truth
