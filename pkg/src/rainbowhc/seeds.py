"""Deterministic 64-bit seed derivation.

Every randomized component derives its per-task seed through the same fixed
avalanche mix, so trials can run on any number of workers in any order and
still reproduce bit-for-bit from one master seed.

The mix is the SplitMix64 finalizer (Steele-Lea-Flood constants), chained as

    h0      = mix64(master + PHI)
    h_{j+1} = mix64(h_j XOR mix64(index_j + PHI))

All arithmetic is modulo 2**64, pure Python ints, identical on every platform.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_PHI64 = 0x9E3779B97F4A7C15  # floor(2^64 / golden ratio), odd
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """SplitMix64 finalizer: a bijective avalanche on 64-bit integers."""
    x &= _MASK64
    x = ((x ^ (x >> 30)) * _MIX1) & _MASK64
    x = ((x ^ (x >> 27)) * _MIX2) & _MASK64
    return x ^ (x >> 31)


def derive_seed(master: int, *indices: int) -> int:
    """Fold integer indices into a master seed, one avalanche round each."""
    h = mix64((master + _PHI64) & _MASK64)
    for idx in indices:
        h = mix64(h ^ mix64((idx + _PHI64) & _MASK64))
    return h


def unit_interval(h: int) -> float:
    """Map a 64-bit hash to a float in [0, 1) using its top 53 bits."""
    return (h >> 11) * (2.0 ** -53)
