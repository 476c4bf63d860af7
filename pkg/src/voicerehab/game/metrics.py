"""Per-session clinical metrics.

Phonation time, pitch change, duration and reaction time, plus the game
counters. Reaction time is the mean over hit targets of the delay between
a target's spawn and the first instant the avatar moved at least 0.02
screen units closer to it; sessions without such hits report no reaction
time.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import FrameError
from ..pitch.types import PitchTrack
from .config import Calibration, GameConfig
from .engine import EventKind, GameEvent, simulate


@dataclass(frozen=True)
class SessionMetrics:
    phonation_time_ms: float
    pitch_change_mel: float
    duration_s: float
    reaction_time_ms: float | None
    score: int
    hit_count: int
    miss_count: int
    spawn_count: int

    def to_dict(self) -> dict:
        return {
            "phonation_time_ms": self.phonation_time_ms,
            "pitch_change_mel": self.pitch_change_mel,
            "duration_s": self.duration_s,
            "reaction_time_ms": self.reaction_time_ms,
            "score": self.score,
            "hit_count": self.hit_count,
            "miss_count": self.miss_count,
            "spawn_count": self.spawn_count,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SessionMetrics":
        return cls(
            phonation_time_ms=float(d["phonation_time_ms"]),
            pitch_change_mel=float(d["pitch_change_mel"]),
            duration_s=float(d["duration_s"]),
            reaction_time_ms=None
            if d["reaction_time_ms"] is None
            else float(d["reaction_time_ms"]),
            score=int(d["score"]),
            hit_count=int(d["hit_count"]),
            miss_count=int(d["miss_count"]),
            spawn_count=int(d["spawn_count"]),
        )


def compute_metrics(
    events: list[GameEvent],
    track: PitchTrack,
    cfg: GameConfig,
    cal: Calibration,
    hop_ms: float | None = None,
) -> SessionMetrics:
    """Derive the session metrics from the event log and pitch track.

    Counters and duration come from the events; reaction times come from
    re-simulating the (deterministic) session, which doubles as an oracle
    that the events belong to this track and config.
    """
    if not events:
        raise FrameError("event log is empty")
    end_events = [e for e in events if e.kind is EventKind.SESSION_END]
    if not end_events:
        raise FrameError("event log has no SESSION_END")

    hop = track.hop_ms if hop_ms is None else hop_ms
    voiced_mels = track.voiced_mels()
    phonation_ms = float(len(voiced_mels)) * hop
    if len(voiced_mels) > 0:
        pitch_change = float(np.percentile(voiced_mels, 95) - np.percentile(voiced_mels, 5))
    else:
        pitch_change = 0.0

    hits = sum(1 for e in events if e.kind is EventKind.HIT)
    misses = sum(1 for e in events if e.kind is EventKind.MISS)
    spawns = sum(1 for e in events if e.kind is EventKind.SPAWN)

    reaction: float | None = None
    if hits:
        final_state, _ = simulate(track, cfg, cal, hop_ms=hop)
        delays = [
            t.reacted_at_ms - t.spawned_at_ms
            for t in final_state.resolved
            if t.resolution == "hit" and t.reacted_at_ms is not None
        ]
        if delays:
            reaction = float(sum(delays) / len(delays))

    return SessionMetrics(
        phonation_time_ms=phonation_ms,
        pitch_change_mel=pitch_change,
        duration_s=end_events[-1].t_ms / 1000.0,
        reaction_time_ms=reaction,
        score=hits,
        hit_count=hits,
        miss_count=misses,
        spawn_count=spawns,
    )
