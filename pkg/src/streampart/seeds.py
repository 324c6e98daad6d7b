"""Deterministic seed derivation.

Every random choice in an experiment (stream order, hash salt, walk paths,
optimizer coin flips) draws from a sub-seed derived from the single master
seed, so runs are exactly replayable and independent runs never share RNG
streams. The mixer is the splitmix64 finalizer; constants are documented in
the README so traces can be matched from other implementations.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1

# splitmix64 constants
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64(x: int) -> int:
    """One splitmix64 step: a 64-bit finalizing mix of ``x``."""
    z = (x + _GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


# Namespace labels for sub-seed derivation. Keep values stable: they are part
# of the reproducibility contract.
STREAM_ORDER = 1
HASH_SALT = 2
NODE_ORDER = 3
WALKS = 4
COINS = 5
BATCH = 6
TRIALS = 7
GRAPH = 8


def derive(master: int, *parts: int) -> int:
    """Derive a 64-bit sub-seed from ``master`` and a label path.

    ``derive(seed, WALKS, request_index, walk_index)`` gives every walk its
    own stream; equal paths always yield equal seeds.
    """
    s = splitmix64(master & _MASK64)
    for p in parts:
        s = splitmix64(s ^ splitmix64(p & _MASK64))
    return s
