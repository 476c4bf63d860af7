"""Server-side live session: audio in, game state out.

The whole deterministic core runs here, not in the UI: incoming samples
are buffered into hop-aligned frames, each hop runs detection, causal
smoothing and one game step, and the smoothed control estimate is what
gets persisted. Replaying the persisted track offline therefore
reproduces the streamed event sequence bit-exactly.

The server's hop clock is authoritative; chunks whose client timestamp
lags it by more than 500 ms are dropped with a warning.
"""
from __future__ import annotations

import uuid
from datetime import datetime, timezone

import numpy as np

from ..analytics.records import SessionRecord, validate_patient_id
from ..analytics.store import SessionStore
from ..errors import ConfigError, ProtocolError
from ..game.config import Calibration, GameConfig, validate_config
from ..game.engine import finish, new_session, step
from ..game.metrics import compute_metrics
from ..pitch.engine import CausalSmoother, detect_f0
from ..pitch.types import AudioFrame, EngineSettings, PitchEstimate, PitchTrack

LATE_CHUNK_TOLERANCE_MS = 500.0


class LiveSessionRunner:
    """One streaming session; call feed_audio/stop in arrival order."""

    def __init__(
        self,
        store: SessionStore,
        patient_id: str,
        config: GameConfig,
        calibration: Calibration,
        engine_settings: EngineSettings,
        sample_rate: int,
        frame_size: int = 2048,
        hop: int = 512,
        session_id: str | None = None,
        now_fn=None,
    ):
        violations = validate_config(config)
        if violations:
            raise ConfigError("invalid config: " + "; ".join(violations))
        engine_settings.check_sample_rate(sample_rate)
        validate_patient_id(patient_id)
        self.store = store
        self.patient_id = patient_id
        self.config = config
        self.calibration = calibration
        self.engine_settings = engine_settings
        self.sample_rate = int(sample_rate)
        self.frame_size = int(frame_size)
        self.hop = int(hop)
        self.hop_ms = self.hop / self.sample_rate * 1000.0
        self.session_id = session_id or str(uuid.uuid4())
        self.started_at = (now_fn or (lambda: datetime.now(timezone.utc)))()

        self.state = new_session(config)
        self.smoother = CausalSmoother(engine_settings.median_window)
        self._buffer = np.zeros(0)
        self._frame_index = 0
        self.control_estimates: list[PitchEstimate] = []
        self.events = []
        self.saved = False

    @property
    def clock_ms(self) -> float:
        return self.state.clock_ms

    def _state_message(self, est: PitchEstimate) -> dict:
        return {
            "type": "STATE",
            "clock_ms": self.state.clock_ms,
            "avatar_y": self.state.avatar_y,
            "score": self.state.score,
            "targets": [{"id": t.id, "x": t.x, "y": t.y} for t in self.state.targets],
            "mel": est.mel if est.voiced else None,
            "voiced": est.voiced,
        }

    def feed_audio(self, samples: np.ndarray, t_ms: float) -> list[dict]:
        if self.saved:
            return []
        if t_ms < self.state.clock_ms - LATE_CHUNK_TOLERANCE_MS:
            return [
                {
                    "type": "WARNING",
                    "message": f"dropped chunk {self.state.clock_ms - t_ms:.0f} ms "
                    "behind the session clock",
                }
            ]
        samples = np.asarray(samples, dtype=np.float64)
        if np.any(~np.isfinite(samples)):
            raise ProtocolError("audio chunk contains non-finite samples")
        self._buffer = np.concatenate([self._buffer, np.clip(samples, -1.0, 1.0)])
        out = []
        while len(self._buffer) >= self.frame_size and not self.state.finished:
            frame = AudioFrame(
                samples=self._buffer[: self.frame_size],
                sample_rate=self.sample_rate,
                t_start=self._frame_index * self.hop_ms,
            )
            self._buffer = self._buffer[self.hop :]
            self._frame_index += 1
            raw = detect_f0(frame, self.engine_settings)
            control = self.smoother.push(raw)
            self.control_estimates.append(control)
            self.state, step_events = step(
                self.state, control, self.config, self.calibration, self.hop_ms
            )
            self.events.extend(step_events)
            out.append(self._state_message(control))
            out.extend({"type": "EVENT", "event": e.to_dict()} for e in step_events)
        if self.state.finished and not self.saved:
            out.extend(self._persist())
        return out

    def stop(self) -> list[dict]:
        """Finish (if still running), persist, and acknowledge."""
        if self.saved:
            return [{"type": "SESSION_SAVED", "session_id": self.session_id}]
        self.state, end_events = finish(self.state)
        self.events.extend(end_events)
        out = [{"type": "EVENT", "event": e.to_dict()} for e in end_events]
        out.extend(self._persist())
        return out

    def _persist(self) -> list[dict]:
        track = PitchTrack(
            estimates=tuple(self.control_estimates), settings=self.engine_settings
        )
        metrics = compute_metrics(
            self.events, track, self.config, self.calibration, hop_ms=self.hop_ms
        )
        record = SessionRecord(
            session_id=self.session_id,
            patient_id=self.patient_id,
            started_at=self.started_at,
            config=self.config,
            calibration=self.calibration,
            engine_settings=self.engine_settings,
            hop_ms=self.hop_ms,
            track=track,
            events=tuple(self.events),
            metrics=metrics,
        )
        self.store.save_session(record)
        self.saved = True
        return [{"type": "SESSION_SAVED", "session_id": self.session_id}]
