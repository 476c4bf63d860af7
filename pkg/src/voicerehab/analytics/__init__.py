from .progress import (
    DEFAULT_RULES,
    ProgressReport,
    Trend,
    analyze_progress,
    hit_rate,
    least_squares,
    load_rules,
    suggest,
)
from .records import SessionRecord, canonical_json, session_checksum
from .store import CREATED, DUPLICATE, SessionStore

__all__ = [
    "CREATED",
    "DEFAULT_RULES",
    "DUPLICATE",
    "ProgressReport",
    "SessionRecord",
    "SessionStore",
    "Trend",
    "analyze_progress",
    "canonical_json",
    "hit_rate",
    "least_squares",
    "load_rules",
    "session_checksum",
    "suggest",
]
