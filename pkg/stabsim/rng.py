"""Counter-based measurement randomness.

The outcome of the k-th random measurement depends only on (seed, k), so every
execution schedule draws the same bits.
"""

import numpy as np

_MASK = (1 << 64) - 1


class CounterRng:
    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK

    def bit(self, ordinal: int) -> int:
        gen = np.random.Philox(key=self.seed, counter=int(ordinal) & _MASK)
        return int(gen.random_raw()) & 1

    def derive(self, shot: int) -> "CounterRng":
        """Generator for one shot: the seed XOR the shot index."""
        return CounterRng(self.seed ^ (int(shot) & _MASK))

    def __repr__(self) -> str:
        return f"CounterRng(seed={self.seed})"
