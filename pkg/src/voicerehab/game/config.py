"""Level configuration, per-patient calibration, and the pitch-to-control map.

The game reads like a side-scrolling target-hold exercise: the avatar's
vertical position follows the patient's pitch, targets stream in from the
right, and holding phonation on a target's height collects it. The level
parameters deliberately expose the clinical difficulty axes: how sensitive
the control is, how often and how spread-out targets appear, how fast they
approach, how long phonation must be held, and how long a session lasts.

``x_spread`` is the mean seconds between spawns and ``y_spread`` the
vertical band (fraction of the screen) targets appear in; both are
documented assumptions, as is freezing the avatar during unvoiced frames
so breathing pauses are not punished.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import CalibrationError, ConfigError
from ..pitch.types import PitchTrack

CONFIG_SCHEMA_VERSION = 1

MIN_CALIBRATION_RANGE_MEL = 50.0
MIN_CALIBRATION_VOICED_MS = 1000.0


@dataclass(frozen=True)
class GameConfig:
    sensitivity: float = 1.0
    x_spread: float = 4.0
    y_spread: float = 0.6
    incoming_speed: float = 0.1
    voice_maintenance_ms: float = 500.0
    session_duration_s: float = 120.0
    hit_radius: float = 0.08
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "version": CONFIG_SCHEMA_VERSION,
            "sensitivity": self.sensitivity,
            "x_spread": self.x_spread,
            "y_spread": self.y_spread,
            "incoming_speed": self.incoming_speed,
            "voice_maintenance_ms": self.voice_maintenance_ms,
            "session_duration_s": self.session_duration_s,
            "hit_radius": self.hit_radius,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GameConfig":
        version = d.get("version", CONFIG_SCHEMA_VERSION)
        if version != CONFIG_SCHEMA_VERSION:
            raise ConfigError(f"unsupported config version {version!r}")
        return cls(
            sensitivity=float(d["sensitivity"]),
            x_spread=float(d["x_spread"]),
            y_spread=float(d["y_spread"]),
            incoming_speed=float(d["incoming_speed"]),
            voice_maintenance_ms=float(d["voice_maintenance_ms"]),
            session_duration_s=float(d["session_duration_s"]),
            hit_radius=float(d["hit_radius"]),
            seed=int(d["seed"]),
        )


def validate_config(cfg: GameConfig) -> list[str]:
    """Check every level-editor constraint; returns all violations, empty
    when the config is playable."""
    violations = []
    if not cfg.sensitivity > 0:
        violations.append("sensitivity > 0")
    if not cfg.x_spread > 0:
        violations.append("x_spread > 0")
    if not 0 < cfg.y_spread <= 1:
        violations.append("y_spread in (0, 1]")
    if not cfg.incoming_speed > 0:
        violations.append("incoming_speed > 0")
    if not cfg.voice_maintenance_ms > 0:
        violations.append("voice_maintenance_ms > 0")
    if not cfg.session_duration_s >= 10:
        violations.append("session_duration_s >= 10")
    if not 0 < cfg.hit_radius < 0.5:
        violations.append("hit_radius in (0, 0.5)")
    return violations


def save_config(path, cfg: GameConfig) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cfg.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_config(path) -> GameConfig:
    with open(path, encoding="utf-8") as fh:
        return GameConfig.from_dict(json.load(fh))


@dataclass(frozen=True)
class Calibration:
    """A patient's comfortable Mel range, mapped onto the control axis."""

    mel_low: float
    mel_high: float

    def __post_init__(self) -> None:
        if not self.mel_low < self.mel_high:
            raise CalibrationError(
                f"need mel_low < mel_high, got {self.mel_low}, {self.mel_high}"
            )

    @property
    def mid(self) -> float:
        return (self.mel_low + self.mel_high) / 2.0

    @property
    def span(self) -> float:
        return self.mel_high - self.mel_low

    def to_dict(self) -> dict:
        return {"mel_low": self.mel_low, "mel_high": self.mel_high}

    @classmethod
    def from_dict(cls, d: dict) -> "Calibration":
        return cls(mel_low=float(d["mel_low"]), mel_high=float(d["mel_high"]))


def calibrate(samples: PitchTrack) -> Calibration:
    """Derive the control range from a guided sweep.

    Takes the 5th/95th percentiles of the voiced mel values; requires at
    least a second of voiced frames and a usable spread.
    """
    voiced = samples.voiced_mels()
    hop = samples.hop_ms
    if hop <= 0 or len(voiced) * hop < MIN_CALIBRATION_VOICED_MS:
        raise CalibrationError(
            f"need at least {MIN_CALIBRATION_VOICED_MS:.0f} ms of voiced frames to calibrate"
        )
    mel_low = float(np.percentile(voiced, 5))
    mel_high = float(np.percentile(voiced, 95))
    if mel_high - mel_low < MIN_CALIBRATION_RANGE_MEL:
        raise CalibrationError(
            f"voiced range {mel_high - mel_low:.1f} Mel is below the "
            f"{MIN_CALIBRATION_RANGE_MEL:.0f} Mel minimum"
        )
    return Calibration(mel_low=mel_low, mel_high=mel_high)


def map_pitch_to_y(mel: float, cal: Calibration, sensitivity: float) -> float:
    """Joystick mapping: calibrated mel range onto screen height [0, 1]."""
    y = 0.5 + sensitivity * (mel - cal.mid) / cal.span
    return min(1.0, max(0.0, y))
