"""Domain types for the pitch engine: frames, estimates, settings, tracks."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, FrameError
from .mel import hz_to_mel

VALID_FRAME_SIZES = (512, 1024, 2048, 4096, 8192)

DEFAULT_FRAME_SIZE = 2048
DEFAULT_HOP = 512
DEFAULT_SAMPLE_RATE = 44100


class Method(str, enum.Enum):
    """The seven selectable pitch estimators."""

    ACF = "ACF"
    AMDF = "AMDF"
    YIN = "YIN"
    MPM = "MPM"
    CEPSTRUM = "CEPSTRUM"
    HPS = "HPS"
    SHS = "SHS"


ALL_METHODS = tuple(Method)


@dataclass(frozen=True)
class AudioFrame:
    """One fixed-size window of mono PCM, the unit of pitch estimation.

    samples must be a power-of-two count between 512 and 8192, each value
    in [-1, 1]. t_start is milliseconds since session start.
    """

    samples: np.ndarray
    sample_rate: int
    t_start: float = 0.0

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or len(samples) not in VALID_FRAME_SIZES:
            raise FrameError(
                f"frame length must be a power of two in [512, 8192], got shape {samples.shape}"
            )
        if not np.all(np.isfinite(samples)):
            raise FrameError("frame contains non-finite samples")
        if np.any(samples < -1.0) or np.any(samples > 1.0):
            raise FrameError("samples must lie in [-1.0, 1.0]")
        if not isinstance(self.sample_rate, (int, np.integer)) or self.sample_rate <= 0:
            raise FrameError(f"sample_rate must be a positive integer, got {self.sample_rate!r}")
        if self.t_start < 0:
            raise FrameError(f"t_start must be non-negative, got {self.t_start}")

    @property
    def rms(self) -> float:
        return float(np.sqrt(np.mean(self.samples**2)))


@dataclass(frozen=True)
class PitchEstimate:
    """Per-frame result: f0 in Hz and Mel when voiced, confidence in [0, 1].

    Unvoiced estimates carry no frequency (f0_hz and mel are None); voiced
    ones always satisfy mel == hz_to_mel(f0_hz).
    """

    voiced: bool
    confidence: float
    t: float
    f0_hz: float | None = None
    mel: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise FrameError(f"confidence must be in [0, 1], got {self.confidence}")
        if self.voiced:
            if self.f0_hz is None:
                raise FrameError("voiced estimate requires f0_hz")
            mel = self.mel if self.mel is not None else hz_to_mel(self.f0_hz)
            expected = hz_to_mel(self.f0_hz)
            if abs(mel - expected) > 1e-9 * max(1.0, expected):
                raise FrameError("mel inconsistent with f0_hz")
            object.__setattr__(self, "mel", mel)
        else:
            if self.f0_hz is not None or self.mel is not None:
                raise FrameError("unvoiced estimate must not carry f0_hz/mel")


@dataclass(frozen=True)
class EngineSettings:
    """Estimator selection plus the shared gating parameters.

    f_min/f_max bound the search range and must satisfy
    0 < f_min < f_max < sample_rate/2 for every frame processed.
    """

    method: Method = Method.YIN
    f_min: float = 60.0
    f_max: float = 600.0
    voicing_threshold: float = 0.5
    silence_rms_floor: float = 0.01
    median_window: int = 5

    def __post_init__(self) -> None:
        method = Method(self.method)
        object.__setattr__(self, "method", method)
        if not (0 < self.f_min < self.f_max):
            raise ConfigError(f"need 0 < f_min < f_max, got {self.f_min}, {self.f_max}")
        if not (0.0 < self.voicing_threshold < 1.0):
            raise ConfigError(f"voicing_threshold must be in (0, 1), got {self.voicing_threshold}")
        if self.silence_rms_floor < 0:
            raise ConfigError("silence_rms_floor must be non-negative")
        if self.median_window < 1 or self.median_window % 2 == 0:
            raise ConfigError(f"median_window must be odd and positive, got {self.median_window}")

    def check_sample_rate(self, sample_rate: int) -> None:
        if self.f_max >= sample_rate / 2:
            raise ConfigError(
                f"f_max {self.f_max} must be below Nyquist ({sample_rate / 2} Hz)"
            )

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "f_min": self.f_min,
            "f_max": self.f_max,
            "voicing_threshold": self.voicing_threshold,
            "silence_rms_floor": self.silence_rms_floor,
            "median_window": self.median_window,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EngineSettings":
        return cls(
            method=Method(d["method"]),
            f_min=float(d["f_min"]),
            f_max=float(d["f_max"]),
            voicing_threshold=float(d["voicing_threshold"]),
            silence_rms_floor=float(d["silence_rms_floor"]),
            median_window=int(d["median_window"]),
        )


_HOP_TOLERANCE_MS = 1e-6


@dataclass(frozen=True)
class PitchTrack:
    """Time-ordered estimates at a uniform frame hop, plus the settings used."""

    estimates: tuple[PitchEstimate, ...]
    settings: EngineSettings

    def __post_init__(self) -> None:
        estimates = tuple(self.estimates)
        object.__setattr__(self, "estimates", estimates)
        ts = [e.t for e in estimates]
        if any(t2 <= t1 for t1, t2 in zip(ts, ts[1:])):
            raise FrameError("estimates must be strictly increasing in t")
        if len(ts) >= 3:
            hops = np.diff(ts)
            if np.max(hops) - np.min(hops) > _HOP_TOLERANCE_MS:
                raise FrameError("estimates must be spaced at a uniform frame hop")

    def __len__(self) -> int:
        return len(self.estimates)

    def __iter__(self):
        return iter(self.estimates)

    @property
    def hop_ms(self) -> float:
        """Hop between consecutive estimates; 0.0 for tracks shorter than 2."""
        if len(self.estimates) < 2:
            return 0.0
        return self.estimates[1].t - self.estimates[0].t

    def voiced_mels(self) -> np.ndarray:
        return np.array([e.mel for e in self.estimates if e.voiced], dtype=np.float64)
