"""Deterministic session RNG (xorshift64*).

The update equations are part of the session format: any implementation
that reproduces them reproduces spawn schedules bit-exactly. State is a
64-bit integer s (never zero); one step is

    s ^= s >> 12
    s ^= (s << 25) & 0xFFFFFFFFFFFFFFFF
    s ^= s >> 27
    output = (s * 0x2545F4914F6CDD1D) & 0xFFFFFFFFFFFFFFFF

and a uniform double in [lo, hi) takes the top 53 bits of the output:
lo + (output >> 11) / 2^53 * (hi - lo). A seed of zero is replaced by
0x9E3779B97F4A7C15.
"""
from __future__ import annotations

_MASK = 0xFFFFFFFFFFFFFFFF
_MULT = 0x2545F4914F6CDD1D
_ZERO_SEED = 0x9E3779B97F4A7C15


class GameRng:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK or _ZERO_SEED

    def next_u64(self) -> int:
        s = self.state
        s ^= s >> 12
        s = (s ^ (s << 25)) & _MASK
        s ^= s >> 27
        self.state = s
        return (s * _MULT) & _MASK

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (self.next_u64() >> 11) / float(1 << 53) * (hi - lo)
