from .engine import CausalSmoother, detect_f0, smooth_track, track_from_frames
from .mel import hz_to_mel, mel_to_hz
from .types import (
    ALL_METHODS,
    DEFAULT_FRAME_SIZE,
    DEFAULT_HOP,
    DEFAULT_SAMPLE_RATE,
    AudioFrame,
    EngineSettings,
    Method,
    PitchEstimate,
    PitchTrack,
)
from .wav import frames_from_samples, read_wav_mono, write_wav_mono

__all__ = [
    "ALL_METHODS",
    "AudioFrame",
    "CausalSmoother",
    "DEFAULT_FRAME_SIZE",
    "DEFAULT_HOP",
    "DEFAULT_SAMPLE_RATE",
    "EngineSettings",
    "Method",
    "PitchEstimate",
    "PitchTrack",
    "detect_f0",
    "frames_from_samples",
    "hz_to_mel",
    "mel_to_hz",
    "read_wav_mono",
    "smooth_track",
    "track_from_frames",
    "write_wav_mono",
]
