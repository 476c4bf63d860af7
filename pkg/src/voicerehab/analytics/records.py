"""Session record schema (version 1) and its JSON codec.

One JSON document per play session. Fields:

* ``schema_version`` -- integer, currently 1.
* ``session_id`` -- UUID string, unique per patient.
* ``patient_id`` -- opaque identifier, restricted to ``[A-Za-z0-9_-]``
  so it is filesystem- and URL-safe.
* ``started_at`` -- RFC 3339 timestamp with UTC offset.
* ``config`` -- the GameConfig the session was played with.
* ``calibration`` -- the patient's mel range used for control.
* ``engine_settings`` -- pitch engine snapshot (method, band, thresholds).
* ``hop_ms`` -- frame hop of the control track, kept explicitly so replay
  is well defined even for degenerate track lengths.
* ``track`` -- parallel arrays ``t_ms`` and ``mel`` (null = unvoiced);
  Hz is omitted for size and reconstructed from mel when needed.
* ``events`` -- the full game event log.
* ``metrics`` -- stored SessionMetrics; always recomputable from track +
  events, and re-verified on every load.
* ``checksum`` -- sha256 hex over the canonical JSON of everything above.
"""
from __future__ import annotations

import hashlib
import json
import re
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone

from ..errors import FrameError, StorageCorruptError
from ..game.config import Calibration, GameConfig
from ..game.engine import GameEvent
from ..game.metrics import SessionMetrics, compute_metrics
from ..pitch.mel import mel_to_hz
from ..pitch.types import EngineSettings, PitchEstimate, PitchTrack

SCHEMA_VERSION = 1

_PATIENT_ID_RE = re.compile(r"^[A-Za-z0-9_-]{1,64}$")


def validate_patient_id(patient_id: str) -> str:
    if not _PATIENT_ID_RE.match(patient_id or ""):
        raise FrameError(
            "patient_id must be 1-64 characters of [A-Za-z0-9_-], "
            f"got {patient_id!r}"
        )
    return patient_id


def validate_session_id(session_id: str) -> str:
    try:
        uuid.UUID(session_id)
    except (ValueError, AttributeError, TypeError):
        raise FrameError(f"session_id must be a UUID, got {session_id!r}") from None
    return session_id


@dataclass(frozen=True)
class SessionRecord:
    session_id: str
    patient_id: str
    started_at: datetime
    config: GameConfig
    calibration: Calibration
    engine_settings: EngineSettings
    hop_ms: float
    track: PitchTrack
    events: tuple[GameEvent, ...]
    metrics: SessionMetrics
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self) -> None:
        validate_patient_id(self.patient_id)
        validate_session_id(self.session_id)
        if self.started_at.tzinfo is None:
            raise FrameError("started_at must be timezone-aware")
        object.__setattr__(self, "events", tuple(self.events))

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "session_id": self.session_id,
            "patient_id": self.patient_id,
            "started_at": self.started_at.astimezone(timezone.utc).isoformat(),
            "config": self.config.to_dict(),
            "calibration": self.calibration.to_dict(),
            "engine_settings": self.engine_settings.to_dict(),
            "hop_ms": self.hop_ms,
            "track": {
                "t_ms": [e.t for e in self.track.estimates],
                "mel": [e.mel if e.voiced else None for e in self.track.estimates],
            },
            "events": [e.to_dict() for e in self.events],
            "metrics": self.metrics.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SessionRecord":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise FrameError(f"unsupported session schema version {d.get('schema_version')!r}")
        settings = EngineSettings.from_dict(d["engine_settings"])
        estimates = []
        for t, mel in zip(d["track"]["t_ms"], d["track"]["mel"]):
            if mel is None:
                estimates.append(PitchEstimate(voiced=False, confidence=0.0, t=float(t)))
            else:
                # pass mel through unchanged so the round trip is byte-faithful
                estimates.append(
                    PitchEstimate(
                        voiced=True,
                        confidence=1.0,
                        t=float(t),
                        f0_hz=mel_to_hz(float(mel)),
                        mel=float(mel),
                    )
                )
        return cls(
            session_id=d["session_id"],
            patient_id=d["patient_id"],
            started_at=datetime.fromisoformat(d["started_at"]),
            config=GameConfig.from_dict(d["config"]),
            calibration=Calibration.from_dict(d["calibration"]),
            engine_settings=settings,
            hop_ms=float(d["hop_ms"]),
            track=PitchTrack(estimates=tuple(estimates), settings=settings),
            events=tuple(GameEvent.from_dict(e) for e in d["events"]),
            metrics=SessionMetrics.from_dict(d["metrics"]),
        )

    def verify_metrics(self) -> None:
        """Re-run the metric computation; stored values must match exactly."""
        recomputed = compute_metrics(
            list(self.events), self.track, self.config, self.calibration, hop_ms=self.hop_ms
        )
        if recomputed != self.metrics:
            raise StorageCorruptError(
                f"stored metrics for session {self.session_id} do not match "
                f"recomputation: {self.metrics} != {recomputed}"
            )


def canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)


def session_checksum(record_dict: dict) -> str:
    """sha256 over the canonical record JSON (checksum field excluded)."""
    body = {k: v for k, v in record_dict.items() if k != "checksum"}
    return hashlib.sha256(canonical_json(body).encode("utf-8")).hexdigest()


def verify_replay(record: SessionRecord) -> list[str]:
    """Re-simulate the stored track and diff against the stored session.

    Returns a list of human-readable discrepancies; empty means the stored
    event log and metrics are exactly reproducible.
    """
    from ..game.engine import simulate  # local import avoids a cycle at module load

    problems: list[str] = []
    _, events = simulate(
        record.track, record.config, record.calibration, hop_ms=record.hop_ms
    )
    if tuple(events) != tuple(record.events):
        n = sum(1 for a, b in zip(events, record.events) if a != b)
        problems.append(
            f"event log mismatch: {n} differing of {len(record.events)} stored, "
            f"{len(events)} replayed"
        )
    recomputed = compute_metrics(
        list(record.events), record.track, record.config, record.calibration,
        hop_ms=record.hop_ms,
    )
    if recomputed != record.metrics:
        problems.append(f"metrics mismatch: stored {record.metrics}, replayed {recomputed}")
    return problems
