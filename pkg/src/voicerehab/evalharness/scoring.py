"""Estimator scoring and ranking.

Metrics follow the usual pitch-tracker evaluation conventions:

* GPE  -- fraction of truth-voiced frames where the estimate is voiced but
          deviates from truth by more than 20%.
* FPE  -- mean absolute error in cents over truth-voiced, estimate-voiced,
          non-gross frames.
* VDE  -- fraction of all frames whose voicing flags disagree with truth.

Composite score = gpe + vde + fpe_cents / 500, lower is better. Scoring
is pure; suite entries and methods can be evaluated in parallel.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

from ..errors import ConfigError, FrameError, VoiceRehabError
from ..pitch.engine import track_from_frames
from ..pitch.types import ALL_METHODS, EngineSettings, Method, PitchTrack
from .synth import FrameTruth, SignalSpec, synthesize

GROSS_ERROR_THRESHOLD = 0.2
FPE_SCORE_WEIGHT = 1.0 / 500.0

SUITE_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class EvalResult:
    method: Method
    gpe: float
    fpe_cents: float
    vde: float

    def __post_init__(self) -> None:
        for name in ("gpe", "vde"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise VoiceRehabError(f"{name} must be in [0, 1], got {v}")
        if self.fpe_cents < 0:
            raise VoiceRehabError(f"fpe_cents must be non-negative, got {self.fpe_cents}")

    @property
    def score(self) -> float:
        return self.gpe + self.vde + self.fpe_cents * FPE_SCORE_WEIGHT

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "gpe": self.gpe,
            "fpe_cents": self.fpe_cents,
            "vde": self.vde,
            "score": self.score,
        }


def score(track: PitchTrack, truth: list[FrameTruth]) -> EvalResult:
    """Score one track against its per-frame truth labels."""
    if len(track) != len(truth):
        raise FrameError(f"track has {len(track)} frames but truth has {len(truth)}")
    n = len(truth)
    truth_voiced = 0
    gross = 0
    fine_errors = []
    voicing_disagreements = 0
    for est, ref in zip(track, truth):
        if est.voiced != ref.voiced:
            voicing_disagreements += 1
        if not ref.voiced:
            continue
        truth_voiced += 1
        if not est.voiced:
            continue
        if abs(est.f0_hz - ref.f0) / ref.f0 > GROSS_ERROR_THRESHOLD:
            gross += 1
        else:
            fine_errors.append(abs(1200.0 * math.log2(est.f0_hz / ref.f0)))
    return EvalResult(
        method=track.settings.method,
        gpe=gross / truth_voiced if truth_voiced else 0.0,
        fpe_cents=sum(fine_errors) / len(fine_errors) if fine_errors else 0.0,
        vde=voicing_disagreements / n if n else 0.0,
    )


def run_benchmark(
    suite: list[SignalSpec],
    settings: dict[Method, EngineSettings] | None = None,
    methods: tuple[Method, ...] = ALL_METHODS,
) -> list[EvalResult]:
    """Score every method over the whole suite and rank ascending by score.

    Per-method metrics are the unweighted mean over suite entries. Ties are
    broken lexicographically by method name; results are bit-reproducible
    for fixed seeds.
    """
    if not suite:
        raise ConfigError("benchmark suite must not be empty")
    if settings is None:
        settings = {}
    rendered = [synthesize(spec) for spec in suite]
    results = []
    for method in methods:
        cfg = settings.get(method, replace(EngineSettings(), method=method))
        per_spec = []
        for frames, truth in rendered:
            track = track_from_frames(frames, cfg)
            per_spec.append(score(track, truth))
        results.append(
            EvalResult(
                method=method,
                gpe=sum(r.gpe for r in per_spec) / len(per_spec),
                fpe_cents=sum(r.fpe_cents for r in per_spec) / len(per_spec),
                vde=sum(r.vde for r in per_spec) / len(per_spec),
            )
        )
    return sorted(results, key=lambda r: (r.score, r.method.value))


def format_report(results: list[EvalResult]) -> str:
    """Plain-text ranking table with the scoring convention spelled out."""
    lines = [
        "Pitch estimator benchmark",
        f"gross error threshold: {GROSS_ERROR_THRESHOLD:.0%} of truth f0; "
        "fine error in cents over non-gross voiced frames",
        f"composite score = gpe + vde + fpe_cents * {FPE_SCORE_WEIGHT}",
        "",
        f"{'rank':<6}{'method':<10}{'gpe':>8}{'fpe_cents':>12}{'vde':>8}{'score':>10}",
    ]
    for rank, r in enumerate(results, start=1):
        lines.append(
            f"{rank:<6}{r.method.value:<10}{r.gpe:>8.4f}{r.fpe_cents:>12.2f}"
            f"{r.vde:>8.4f}{r.score:>10.4f}"
        )
    return "\n".join(lines) + "\n"


def results_to_json(results: list[EvalResult]) -> str:
    payload = {
        "gross_error_threshold": GROSS_ERROR_THRESHOLD,
        "fpe_score_weight": FPE_SCORE_WEIGHT,
        "ranking": [r.to_dict() for r in results],
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def default_dysphonic_suite() -> list[SignalSpec]:
    """The stock dysphonic stand-in suite: jitter 3%, shimmer 8%, 15 dB SNR."""
    perturb = {"jitter_pct": 3.0, "shimmer_pct": 8.0, "noise_snr_db": 15.0}
    return [
        SignalSpec(
            waveform="sawtooth",
            f0_contour=((0.0, 150.0),),
            duration_s=1.5,
            seed=101,
            **perturb,
        ),
        SignalSpec(
            waveform="sine",
            f0_contour=((0.0, 220.0), (1.5, 220.0)),
            duration_s=1.5,
            seed=102,
            **perturb,
        ),
        SignalSpec(
            waveform="pulse-train",
            f0_contour=((0.0, 120.0), (1.5, 180.0)),
            duration_s=1.5,
            seed=103,
            **perturb,
        ),
        SignalSpec(
            waveform="sawtooth",
            f0_contour=((0.0, 180.0), (0.7, 260.0), (0.7001, 0.0), (1.0, 0.0), (1.0001, 200.0), (1.8, 200.0)),
            duration_s=1.8,
            seed=104,
            **perturb,
        ),
        SignalSpec(
            waveform="sine",
            f0_contour=((0.0, 0.0), (0.3, 0.0), (0.3001, 300.0), (1.2, 340.0)),
            duration_s=1.5,
            seed=105,
            **perturb,
        ),
    ]


def save_suite(path, suite: list[SignalSpec]) -> None:
    doc = {"version": SUITE_SCHEMA_VERSION, "specs": [s.to_dict() for s in suite]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_suite(path) -> list[SignalSpec]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("version") != SUITE_SCHEMA_VERSION:
        raise ConfigError(f"unsupported suite version {doc.get('version')!r}")
    specs = [SignalSpec.from_dict(d) for d in doc.get("specs", [])]
    if not specs:
        raise ConfigError("suite file contains no specs")
    return specs
