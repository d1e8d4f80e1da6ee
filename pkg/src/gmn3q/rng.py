"""Deterministic 64-bit PRNG with per-index substreams.

xoshiro256++ over pure Python integers, seeded through splitmix64, so a
(seed, stream) pair yields the same bit stream on every platform and
interpreter. Stream k mixes the seed with k times the splitmix
increment before state expansion, giving independent substreams per
sample index. Floating-point outputs go through math.log/cos/sin and
therefore match across platforms only as far as the C library rounds
identically (in practice: exactly, on mainstream libms).
"""
from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_TWO_PI = 2.0 * math.pi


def _splitmix64(x):
    """One splitmix64 step: returns (new_state, output)."""
    x = (x + _SPLITMIX_GAMMA) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return x, z ^ (z >> 31)


def _rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & _MASK


class Xoshiro256pp:
    """xoshiro256++ generator for stream `stream` of seed `seed`."""

    def __init__(self, seed, stream=0):
        seed = int(seed) & _MASK
        x = (seed + (int(stream) & _MASK) * _SPLITMIX_GAMMA) & _MASK
        state = []
        for _ in range(4):
            x, out = _splitmix64(x)
            state.append(out)
        if not any(state):  # the all-zero state is a fixed point
            state[0] = _SPLITMIX_GAMMA
        self._s = state

    def next_u64(self):
        s = self._s
        result = (_rotl((s[0] + s[3]) & _MASK, 23) + s[0]) & _MASK
        t = (s[1] << 17) & _MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self):
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def uniform(self, low, high):
        return low + (high - low) * self.random()

    def normal_pair(self):
        """Two independent standard normals via the Box-Muller transform."""
        # u1 in (0, 1] keeps the log finite
        u1 = ((self.next_u64() >> 11) + 1) * 2.0 ** -53
        u2 = self.random()
        r = math.sqrt(-2.0 * math.log(u1))
        return r * math.cos(_TWO_PI * u2), r * math.sin(_TWO_PI * u2)

    def normals(self, n):
        """Array of n independent standard normals."""
        out = []
        while len(out) < n:
            out.extend(self.normal_pair())
        return np.array(out[:n])
