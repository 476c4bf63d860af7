"""Frame-to-estimate pipeline: detection, track assembly, smoothing.

``detect_f0`` is pure and reentrant; frames may be processed in parallel.
``smooth_track`` is the offline (centered) stabilizer; ``CausalSmoother``
is its streaming counterpart used by the live game loop, where only past
frames exist.
"""
from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from .detectors import run_method
from .mel import hz_to_mel, mel_to_hz
from .types import AudioFrame, EngineSettings, PitchEstimate, PitchTrack


def detect_f0(frame: AudioFrame, settings: EngineSettings) -> PitchEstimate:
    """Estimate the fundamental of one frame.

    Voiced iff frame RMS clears the silence floor, the method's periodicity
    confidence reaches the voicing threshold, and the refined f0 lies inside
    [f_min, f_max] (refinement overshoot at the band edge is clamped).
    """
    settings.check_sample_rate(frame.sample_rate)
    if frame.rms < settings.silence_rms_floor:
        return PitchEstimate(voiced=False, confidence=0.0, t=frame.t_start)
    f0, confidence = run_method(
        settings.method, frame.samples, frame.sample_rate, settings.f_min, settings.f_max
    )
    confidence = float(min(1.0, max(0.0, confidence)))
    if f0 is None or confidence < settings.voicing_threshold:
        return PitchEstimate(voiced=False, confidence=confidence, t=frame.t_start)
    f0 = float(min(settings.f_max, max(settings.f_min, f0)))
    return PitchEstimate(
        voiced=True, confidence=confidence, t=frame.t_start, f0_hz=f0, mel=hz_to_mel(f0)
    )


def track_from_frames(frames, settings: EngineSettings) -> PitchTrack:
    """Run ``detect_f0`` over a frame sequence and assemble a track."""
    return PitchTrack(
        estimates=tuple(detect_f0(f, settings) for f in frames), settings=settings
    )


def _voiced_estimate(template: PitchEstimate, mel: float, confidence: float) -> PitchEstimate:
    return PitchEstimate(
        voiced=True,
        confidence=confidence,
        t=template.t,
        f0_hz=mel_to_hz(mel),
        mel=None,  # recomputed from f0 to keep the pair consistent
    )


def smooth_track(track: PitchTrack, median_window: int) -> PitchTrack:
    """Centered running median over voiced mel values.

    Unvoiced gaps shorter than (median_window - 1) / 2 frames between two
    voiced frames are bridged by linear interpolation before the median.
    Timestamps are unchanged; an empty track passes through.
    """
    if median_window < 1 or median_window % 2 == 0:
        raise ConfigError(f"median window must be odd and positive, got {median_window}")
    estimates = list(track.estimates)
    if not estimates:
        return track

    bridged = list(estimates)
    max_gap = (median_window - 1) // 2
    i = 0
    while i < len(bridged):
        if bridged[i].voiced:
            i += 1
            continue
        j = i
        while j < len(bridged) and not bridged[j].voiced:
            j += 1
        gap = j - i
        if 0 < gap < max_gap and i > 0 and j < len(bridged):
            left, right = bridged[i - 1], bridged[j]
            conf = min(left.confidence, right.confidence)
            for k in range(i, j):
                frac = (k - i + 1) / (gap + 1)
                mel = left.mel + frac * (right.mel - left.mel)
                bridged[k] = _voiced_estimate(bridged[k], mel, conf)
        i = j

    half = (median_window - 1) // 2
    smoothed = []
    for i, est in enumerate(bridged):
        if not est.voiced:
            smoothed.append(est)
            continue
        window = bridged[max(0, i - half) : i + half + 1]
        mels = [e.mel for e in window if e.voiced]
        smoothed.append(_voiced_estimate(est, float(np.median(mels)), est.confidence))
    return PitchTrack(estimates=tuple(smoothed), settings=track.settings)


class CausalSmoother:
    """Trailing median over the last ``median_window`` estimates.

    The live loop cannot see future frames, so the control signal is the
    median of voiced mels within the trailing window. Output voicing follows
    the current raw estimate; warm-up lasts median_window - 1 hops.
    """

    def __init__(self, median_window: int):
        if median_window < 1 or median_window % 2 == 0:
            raise ConfigError(f"median window must be odd and positive, got {median_window}")
        self.window = median_window
        self._recent: list[PitchEstimate] = []

    def push(self, estimate: PitchEstimate) -> PitchEstimate:
        self._recent.append(estimate)
        if len(self._recent) > self.window:
            self._recent.pop(0)
        if not estimate.voiced:
            return estimate
        mels = [e.mel for e in self._recent if e.voiced]
        return _voiced_estimate(estimate, float(np.median(mels)), estimate.confidence)
