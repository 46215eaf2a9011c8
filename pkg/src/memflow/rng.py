"""Portable integer PRNG used for instance generation.

PCG-XSH-RR 64/32 with a splitmix64 seed expansion. The stream is fully
specified here so that the same (n, ratio, k, seed) produces the same
instance on any platform.
"""

MASK64 = (1 << 64) - 1
MASK32 = (1 << 32) - 1

PCG_MULTIPLIER = 6364136223846793005


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)


class Pcg32:
    """PCG-XSH-RR generator with 64-bit state and 32-bit output.

    The constructor follows the reference ``pcg32_srandom_r``;
    :meth:`from_seed` draws ``initstate`` then ``initseq`` from a
    splitmix64 stream started at the user seed.
    """

    def __init__(self, initstate: int, initseq: int):
        self.state = 0
        self.inc = ((initseq << 1) | 1) & MASK64
        self._advance()
        self.state = (self.state + (initstate & MASK64)) & MASK64
        self._advance()

    @classmethod
    def from_seed(cls, seed: int) -> "Pcg32":
        sm = SplitMix64(seed)
        initstate = sm.next()
        return cls(initstate, sm.next())

    def _advance(self) -> None:
        self.state = (self.state * PCG_MULTIPLIER + self.inc) & MASK64

    def next_u32(self) -> int:
        old = self.state
        self._advance()
        xorshifted = (((old >> 18) ^ old) >> 27) & MASK32
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((-rot) & 31))) & MASK32

    def bounded(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection (``pcg32_boundedrand_r``)."""
        if not 0 < bound <= MASK32:
            raise ValueError(f"bound must be in [1, 2^32), got {bound}")
        threshold = ((1 << 32) - bound) % bound
        while True:
            r = self.next_u32()
            if r >= threshold:
                return r % bound

    def bit(self) -> int:
        return self.next_u32() >> 31
