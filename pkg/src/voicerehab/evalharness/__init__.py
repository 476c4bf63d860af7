from .scoring import (
    EvalResult,
    default_dysphonic_suite,
    format_report,
    load_suite,
    results_to_json,
    run_benchmark,
    save_suite,
    score,
)
from .synth import FrameTruth, SignalSpec, render_signal, synthesize

__all__ = [
    "EvalResult",
    "FrameTruth",
    "SignalSpec",
    "default_dysphonic_suite",
    "format_report",
    "load_suite",
    "render_signal",
    "results_to_json",
    "run_benchmark",
    "save_suite",
    "score",
    "synthesize",
]
