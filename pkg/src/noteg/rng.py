"""Deterministic scene PRNG.

Algorithm: SplitMix64 (Steele/Lea/Flood). 64-bit state, one additive
step plus two xor-multiply mixes per draw. Chosen because the whole
generator state is a single u64 that serializes into the scene hash,
and the sequence is fixed for a given seed across runs of this
package. Cross-implementation hash equality is not promised for
RNG-dependent scenes; this generator and its use sites are.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class GameRng:
    """Seedable SplitMix64 stream; `state` is the full serializable state."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform float in [0, 1): top 53 bits over 2^53."""
        return (self.next_u64() >> 11) / 9007199254740992.0

    def copy(self) -> "GameRng":
        dup = GameRng(0)
        dup.state = self.state
        return dup
