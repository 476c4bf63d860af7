"""Longitudinal trends and rule-based exercise suggestions.

Trends are ordinary least squares over the session index (0..n-1), not
wall-clock time: session cadence varies per patient. A single session has
slope 0 by convention.

The suggestion rules are a versioned data table, so thresholds can be
tuned without code changes. The stock table (version 1) is, exhaustively:

* R1 -- pitch_change_mel slope < 0 over at least 3 sessions:
        "increase y_spread".
* R2 -- hit rate (hits / resolved targets) > 0.9 in the latest session:
        "raise voice_maintenance_ms".
* R3 -- phonation_time_ms slope <= 0 over at least 5 sessions:
        "flag for therapist review".

Rule kinds understood by the evaluator: ``slope_below`` (strict),
``slope_at_most`` (inclusive), ``latest_hit_rate_above`` (strict).
Suggestions are emitted in table order as "<id>: <text>"; evaluation is a
pure function of the report.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from ..errors import ConfigError, FrameError
from ..game.metrics import SessionMetrics
from .records import SessionRecord

RULES_VERSION = 1

DEFAULT_RULES: list[dict] = [
    {
        "id": "R1",
        "kind": "slope_below",
        "metric": "pitch_change_mel",
        "threshold": 0.0,
        "min_sessions": 3,
        "suggestion": "increase y_spread",
    },
    {
        "id": "R2",
        "kind": "latest_hit_rate_above",
        "threshold": 0.9,
        "min_sessions": 1,
        "suggestion": "raise voice_maintenance_ms",
    },
    {
        "id": "R3",
        "kind": "slope_at_most",
        "metric": "phonation_time_ms",
        "threshold": 0.0,
        "min_sessions": 5,
        "suggestion": "flag for therapist review",
    },
]

TREND_METRICS = (
    "phonation_time_ms",
    "pitch_change_mel",
    "duration_s",
    "reaction_time_ms",
    "score",
    "hit_count",
    "miss_count",
)


@dataclass(frozen=True)
class Trend:
    slope: float
    intercept: float
    n_points: int

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "n_points": self.n_points}


@dataclass(frozen=True)
class ProgressReport:
    patient_id: str
    n_sessions: int
    trends: dict[str, Trend]
    latest: SessionMetrics
    suggestions: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "patient_id": self.patient_id,
            "n_sessions": self.n_sessions,
            "trends": {k: v.to_dict() for k, v in self.trends.items()},
            "latest": self.latest.to_dict(),
            "suggestions": list(self.suggestions),
        }


def least_squares(points: list[tuple[float, float]]) -> tuple[float, float]:
    """OLS slope and intercept; fewer than two points yield slope 0."""
    n = len(points)
    if n == 0:
        return 0.0, 0.0
    if n == 1:
        return 0.0, points[0][1]
    mean_x = sum(x for x, _ in points) / n
    mean_y = sum(y for _, y in points) / n
    sxx = sum((x - mean_x) ** 2 for x, _ in points)
    if sxx == 0.0:
        return 0.0, mean_y
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in points)
    slope = sxy / sxx
    return slope, mean_y - slope * mean_x


def analyze_progress(
    sessions: list[SessionRecord], rules: list[dict] | None = None
) -> ProgressReport:
    """Trend report over one patient's time-ordered sessions."""
    if not sessions:
        raise FrameError("need at least one session")
    patient_ids = {s.patient_id for s in sessions}
    if len(patient_ids) != 1:
        raise FrameError(f"sessions span multiple patients: {sorted(patient_ids)}")

    trends: dict[str, Trend] = {}
    for metric in TREND_METRICS:
        points = []
        for i, session in enumerate(sessions):
            value = getattr(session.metrics, metric)
            if value is None:
                continue
            points.append((float(i), float(value)))
        slope, intercept = least_squares(points)
        if not (math.isfinite(slope) and math.isfinite(intercept)):
            raise FrameError(f"non-finite trend for {metric}")
        trends[metric] = Trend(slope=slope, intercept=intercept, n_points=len(points))

    report = ProgressReport(
        patient_id=sessions[0].patient_id,
        n_sessions=len(sessions),
        trends=trends,
        latest=sessions[-1].metrics,
    )
    return ProgressReport(
        patient_id=report.patient_id,
        n_sessions=report.n_sessions,
        trends=report.trends,
        latest=report.latest,
        suggestions=suggest(report, rules),
    )


def hit_rate(metrics: SessionMetrics) -> float:
    resolved = metrics.hit_count + metrics.miss_count
    return metrics.hit_count / resolved if resolved else 0.0


def suggest(report: ProgressReport, rules: list[dict] | None = None) -> list[str]:
    """Evaluate the rule table against a report; deterministic, table order."""
    out = []
    for rule in DEFAULT_RULES if rules is None else rules:
        if report.n_sessions < rule["min_sessions"]:
            continue
        kind = rule["kind"]
        if kind == "slope_below":
            fired = report.trends[rule["metric"]].slope < rule["threshold"]
        elif kind == "slope_at_most":
            fired = report.trends[rule["metric"]].slope <= rule["threshold"]
        elif kind == "latest_hit_rate_above":
            fired = hit_rate(report.latest) > rule["threshold"]
        else:
            raise ConfigError(f"unknown rule kind {kind!r}")
        if fired:
            out.append(f"{rule['id']}: {rule['suggestion']}")
    return out


def load_rules(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("version") != RULES_VERSION:
        raise ConfigError(f"unsupported rules version {doc.get('version')!r}")
    return list(doc["rules"])
