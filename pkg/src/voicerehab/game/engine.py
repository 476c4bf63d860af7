"""Deterministic game state machine.

One logical owner advances a session by calling ``step`` once per frame hop
in timestamp order; instances for different patients are independent. Every
outcome is a pure function of (config, calibration, seed, estimate
sequence), so a recorded session replays to a bit-identical event log.

Step order within one tick is fixed and part of the replay contract:
clock, avatar, phonation transitions, target motion, misses, spawns,
reaction bookkeeping, hold accumulation and hits, then session end.
Events within a tick are emitted in that order, all stamped with the
post-advance clock.
"""
from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field

from ..errors import StateError
from ..pitch.types import PitchEstimate, PitchTrack
from .config import Calibration, GameConfig, map_pitch_to_y
from .rng import GameRng

SPAWN_X = 1.1
DESPAWN_X = -0.1
REACTION_DELTA = 0.02


class EventKind(str, enum.Enum):
    SPAWN = "SPAWN"
    HIT = "HIT"
    MISS = "MISS"
    PHONATION_START = "PHONATION_START"
    PHONATION_STOP = "PHONATION_STOP"
    SESSION_END = "SESSION_END"


@dataclass(frozen=True)
class GameEvent:
    t_ms: float
    kind: EventKind
    target_id: int | None = None

    def to_dict(self) -> dict:
        return {"t_ms": self.t_ms, "kind": self.kind.value, "target_id": self.target_id}

    @classmethod
    def from_dict(cls, d: dict) -> "GameEvent":
        return cls(t_ms=float(d["t_ms"]), kind=EventKind(d["kind"]), target_id=d["target_id"])


@dataclass
class Target:
    id: int
    x: float
    y: float
    spawned_at_ms: float
    hold_ms: float = 0.0
    dist_at_spawn: float = 0.0
    reacted_at_ms: float | None = None
    resolution: str | None = None
    resolved_at_ms: float | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "x": self.x,
            "y": self.y,
            "spawned_at_ms": self.spawned_at_ms,
            "hold_ms": self.hold_ms,
            "dist_at_spawn": self.dist_at_spawn,
            "reacted_at_ms": self.reacted_at_ms,
            "resolution": self.resolution,
            "resolved_at_ms": self.resolved_at_ms,
        }


@dataclass
class GameState:
    rng: GameRng
    clock_ms: float = 0.0
    avatar_y: float = 0.5
    targets: list[Target] = field(default_factory=list)
    resolved: list[Target] = field(default_factory=list)
    score: int = 0
    finished: bool = False
    prev_voiced: bool = False
    next_spawn_at_ms: float = 0.0
    next_target_id: int = 0
    spawn_count: int = 0

    def to_dict(self) -> dict:
        return {
            "clock_ms": self.clock_ms,
            "avatar_y": self.avatar_y,
            "targets": [t.to_dict() for t in self.targets],
            "resolved": [t.to_dict() for t in self.resolved],
            "score": self.score,
            "finished": self.finished,
            "prev_voiced": self.prev_voiced,
            "next_spawn_at_ms": self.next_spawn_at_ms,
            "next_target_id": self.next_target_id,
            "spawn_count": self.spawn_count,
            "rng_state": self.rng.state,
        }

    def state_hash(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def new_session(cfg: GameConfig) -> GameState:
    """Fresh state with the first spawn scheduled (one rng draw)."""
    rng = GameRng(cfg.seed)
    state = GameState(rng=rng)
    state.next_spawn_at_ms = rng.uniform(0.5 * cfg.x_spread, 1.5 * cfg.x_spread) * 1000.0
    return state


def step(
    state: GameState,
    est: PitchEstimate,
    cfg: GameConfig,
    cal: Calibration,
    dt_ms: float,
) -> tuple[GameState, list[GameEvent]]:
    """Advance one frame hop. Mutates and returns the state plus the events
    of this tick. Raises StateError on a finished session."""
    if state.finished:
        raise StateError("cannot step a finished session")
    events: list[GameEvent] = []
    state.clock_ms += dt_ms
    now = state.clock_ms

    if est.voiced:
        state.avatar_y = map_pitch_to_y(est.mel, cal, cfg.sensitivity)
    if est.voiced != state.prev_voiced:
        kind = EventKind.PHONATION_START if est.voiced else EventKind.PHONATION_STOP
        events.append(GameEvent(t_ms=now, kind=kind))
        state.prev_voiced = est.voiced

    dx = cfg.incoming_speed * dt_ms / 1000.0
    for target in state.targets:
        target.x -= dx

    still_active: list[Target] = []
    for target in state.targets:
        if target.x < DESPAWN_X:
            target.resolution = "miss"
            target.resolved_at_ms = now
            state.resolved.append(target)
            events.append(GameEvent(t_ms=now, kind=EventKind.MISS, target_id=target.id))
        else:
            still_active.append(target)
    state.targets = still_active

    while state.next_spawn_at_ms <= now:
        y = state.rng.uniform(0.5 - cfg.y_spread / 2.0, 0.5 + cfg.y_spread / 2.0)
        target = Target(
            id=state.next_target_id,
            x=SPAWN_X,
            y=y,
            spawned_at_ms=now,
            dist_at_spawn=abs(state.avatar_y - y),
        )
        state.targets.append(target)
        state.next_target_id += 1
        state.spawn_count += 1
        events.append(GameEvent(t_ms=now, kind=EventKind.SPAWN, target_id=target.id))
        gap_s = state.rng.uniform(0.5 * cfg.x_spread, 1.5 * cfg.x_spread)
        state.next_spawn_at_ms += gap_s * 1000.0

    for target in state.targets:
        if target.reacted_at_ms is None:
            if target.dist_at_spawn - abs(state.avatar_y - target.y) >= REACTION_DELTA:
                target.reacted_at_ms = now

    still_active = []
    for target in state.targets:
        if est.voiced and abs(state.avatar_y - target.y) <= cfg.hit_radius:
            target.hold_ms += dt_ms
        else:
            target.hold_ms = 0.0
        if target.hold_ms >= cfg.voice_maintenance_ms:
            target.hold_ms = cfg.voice_maintenance_ms
            target.resolution = "hit"
            target.resolved_at_ms = now
            state.resolved.append(target)
            state.score += 1
            events.append(GameEvent(t_ms=now, kind=EventKind.HIT, target_id=target.id))
        else:
            still_active.append(target)
    state.targets = still_active

    if now >= cfg.session_duration_s * 1000.0:
        state.finished = True
        events.append(GameEvent(t_ms=now, kind=EventKind.SESSION_END))
    return state, events


def finish(state: GameState) -> tuple[GameState, list[GameEvent]]:
    """Terminate a session early (patient stopped). No-op when finished."""
    if state.finished:
        return state, []
    state.finished = True
    return state, [GameEvent(t_ms=state.clock_ms, kind=EventKind.SESSION_END)]


def simulate(
    track: PitchTrack,
    cfg: GameConfig,
    cal: Calibration,
    hop_ms: float | None = None,
    force_finish: bool = True,
) -> tuple[GameState, list[GameEvent]]:
    """Run a whole session from a recorded estimate sequence.

    This is both the offline replay path and the reaction-time oracle:
    feeding the persisted track through it reproduces the live event log
    bit-exactly. Stops early once the clock reaches the session limit.
    """
    state = new_session(cfg)
    events: list[GameEvent] = []
    dt = track.hop_ms if hop_ms is None else hop_ms
    if dt > 0:
        for est in track:
            state, step_events = step(state, est, cfg, cal, dt)
            events.extend(step_events)
            if state.finished:
                break
    if force_finish and not state.finished:
        state, end_events = finish(state)
        events.extend(end_events)
    return state, events
