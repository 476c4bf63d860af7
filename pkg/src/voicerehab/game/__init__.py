from .config import (
    Calibration,
    GameConfig,
    calibrate,
    load_config,
    map_pitch_to_y,
    save_config,
    validate_config,
)
from .engine import (
    EventKind,
    GameEvent,
    GameState,
    Target,
    finish,
    new_session,
    simulate,
    step,
)
from .metrics import SessionMetrics, compute_metrics
from .rng import GameRng

__all__ = [
    "Calibration",
    "EventKind",
    "GameConfig",
    "GameEvent",
    "GameRng",
    "GameState",
    "SessionMetrics",
    "Target",
    "calibrate",
    "compute_metrics",
    "finish",
    "load_config",
    "map_pitch_to_y",
    "new_session",
    "save_config",
    "simulate",
    "step",
    "validate_config",
]
