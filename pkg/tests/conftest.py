from __future__ import annotations

import uuid
from datetime import datetime, timezone

import numpy as np
import pytest

from voicerehab.analytics.records import SessionRecord
from voicerehab.game.config import Calibration, GameConfig
from voicerehab.game.metrics import SessionMetrics, compute_metrics
from voicerehab.game.engine import simulate
from voicerehab.pitch.mel import mel_to_hz
from voicerehab.pitch.types import EngineSettings, PitchEstimate, PitchTrack

HOP_MS = 512 / 44100 * 1000.0


def make_track(mels, hop_ms: float = HOP_MS, settings: EngineSettings | None = None) -> PitchTrack:
    """Track from a list of mel values (None = unvoiced frame)."""
    estimates = []
    for i, mel in enumerate(mels):
        if mel is None:
            estimates.append(PitchEstimate(voiced=False, confidence=0.0, t=i * hop_ms))
        else:
            estimates.append(
                PitchEstimate(
                    voiced=True,
                    confidence=1.0,
                    t=i * hop_ms,
                    f0_hz=mel_to_hz(float(mel)),
                    mel=float(mel),
                )
            )
    return PitchTrack(estimates=tuple(estimates), settings=settings or EngineSettings())


def random_mels(rng: np.random.Generator, n: int, voiced_prob: float = 0.85,
                lo: float = 250.0, hi: float = 480.0) -> list:
    mels = []
    for _ in range(n):
        if rng.random() < voiced_prob:
            mels.append(float(rng.uniform(lo, hi)))
        else:
            mels.append(None)
    return mels


@pytest.fixture
def default_cal() -> Calibration:
    return Calibration(mel_low=280.0, mel_high=450.0)


def run_session(mels, cfg: GameConfig, cal: Calibration):
    track = make_track(mels)
    state, events = simulate(track, cfg, cal)
    return track, state, events


def make_record(
    patient_id: str = "p01",
    mels=None,
    cfg: GameConfig | None = None,
    cal: Calibration | None = None,
    session_id: str | None = None,
    started_at: datetime | None = None,
) -> SessionRecord:
    """A fully consistent session record from a synthetic control track."""
    cfg = cfg or GameConfig(session_duration_s=10.0, x_spread=1.0, seed=7)
    cal = cal or Calibration(mel_low=280.0, mel_high=450.0)
    if mels is None:
        rng = np.random.default_rng(11)
        mels = random_mels(rng, 880)
    track = make_track(mels)
    state, events = simulate(track, cfg, cal)
    metrics = compute_metrics(list(events), track, cfg, cal, hop_ms=HOP_MS)
    return SessionRecord(
        session_id=session_id or str(uuid.uuid4()),
        patient_id=patient_id,
        started_at=started_at or datetime(2026, 8, 10, 12, 0, tzinfo=timezone.utc),
        config=cfg,
        calibration=cal,
        engine_settings=track.settings,
        hop_ms=HOP_MS,
        track=track,
        events=tuple(events),
        metrics=metrics,
    )


def fabricate_record_with_metrics(
    patient_id: str, index: int, metrics: SessionMetrics
) -> SessionRecord:
    """Record carrying arbitrary metrics, for trend/suggestion unit tests."""
    base = make_record(
        patient_id=patient_id,
        session_id=str(uuid.UUID(int=index + 1)),
        started_at=datetime(2026, 8, 1 + index, 12, 0, tzinfo=timezone.utc),
    )
    return SessionRecord(
        session_id=base.session_id,
        patient_id=base.patient_id,
        started_at=base.started_at,
        config=base.config,
        calibration=base.calibration,
        engine_settings=base.engine_settings,
        hop_ms=base.hop_ms,
        track=base.track,
        events=base.events,
        metrics=metrics,
    )
