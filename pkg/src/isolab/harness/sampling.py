"""A seeded 64-bit linear congruential stream.

Reports record the multiplier, increment and seed, so any sample can be
regenerated bit for bit on any Python version.
"""

from __future__ import annotations

A = 6364136223846793005
C = 1442695040888963407
MASK = (1 << 64) - 1


class Lcg:
    def __init__(self, seed: int = 0):
        self.seed = int(seed)
        self.state = self.seed & MASK
        self.draws = 0

    def next(self) -> int:
        self.state = (A * self.state + C) & MASK
        self.draws += 1
        return self.state

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` (rejection on the high bits)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next()
            if x < limit:
                return x % n

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def sample(self, seq, k: int) -> list:
        """``k`` distinct items of ``seq`` by a partial Fisher-Yates shuffle."""
        pool = list(seq)
        k = min(k, len(pool))
        for i in range(k):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def record(self) -> dict:
        return {"kind": "lcg64", "a": A, "c": C, "seed": self.seed, "draws": self.draws}
