"""Hz <-> Mel conversion (O'Shaughnessy form: mel = 2595 * log10(1 + f/700)).

Strictly monotone, mel(0) = 0, and the two functions are exact inverses up
to floating point, so they are safe to use for round-tripping stored pitch
values.
"""
from __future__ import annotations

import math


def hz_to_mel(f: float) -> float:
    """Convert a frequency in Hz (>= 0) to Mel.

    Raises:
        ValueError: if f is negative.
    """
    if f < 0:
        raise ValueError(f"frequency must be non-negative, got {f}")
    return 2595.0 * math.log10(1.0 + f / 700.0)


def mel_to_hz(m: float) -> float:
    """Inverse of :func:`hz_to_mel`.

    Raises:
        ValueError: if m is negative.
    """
    if m < 0:
        raise ValueError(f"mel value must be non-negative, got {m}")
    return 700.0 * (10.0 ** (m / 2595.0) - 1.0)
