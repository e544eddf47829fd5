"""Deterministic splitmix64 generator.

Every randomized-looking choice in minlab (Hoelder pair sampling, random
boundary data) is drawn from this generator so that reruns -- and
re-implementations in other languages -- agree on the sampled values.

Algorithm (64-bit wrapping arithmetic):

    state += 0x9E3779B97F4B7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

``uniform`` maps the top 53 bits to [0, 1); ``below(n)`` reduces modulo n
(the modulo bias is irrelevant at the sample counts used here and keeps
the reduction trivially portable).
"""

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4B7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_signed(self) -> float:
        """Uniform double in [-1, 1)."""
        return 2.0 * self.uniform() - 1.0

    def below(self, n: int) -> int:
        """Integer in [0, n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        return self.next_u64() % n
