"""Tiny splittable RNG shared by the exact and the compiled lanes.

SplitMix64 is deterministic, trivially portable and good enough for move
shuffling; using the same generator in both simulation lanes makes their
traces comparable bit for bit in tests.
"""

from __future__ import annotations

MASK = (1 << 64) - 1


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return (z ^ (z >> 31)) & MASK

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection-free modulo (n is tiny)."""
        return self.next_u64() % n

    def shuffle(self, xs: list) -> None:
        for i in range(len(xs) - 1, 0, -1):
            j = self.randint(i + 1)
            xs[i], xs[j] = xs[j], xs[i]

    def choice(self, xs: list):
        return xs[self.randint(len(xs))]


def derive_seed(master: int, *indices: int) -> int:
    """Stable per-trial seed derivation: hash-mix the master and indices."""
    g = SplitMix64(master)
    s = g.next_u64()
    for ix in indices:
        g2 = SplitMix64((s ^ (ix + 0x1234567)) & MASK)
        g2.next_u64()
        s = g2.next_u64()
    return s
