"""Counter-based deterministic randomness.

Draws are keyed by (seed, counters...) through blake2b, so results are
independent of evaluation order and identical across platforms.
"""

from hashlib import blake2b


def draw_u128(seed: int, *counters: int) -> int:
    """A 128-bit integer determined by the seed and counter tuple."""
    key = ",".join(str(c) for c in (seed,) + counters).encode()
    return int.from_bytes(blake2b(key, digest_size=16).digest(), "big")


def draw_index(seed: int, n: int, *counters: int) -> int:
    """An index in [0, n) determined by the seed and counter tuple.

    Bias from the modulo is at most 2^-100 for desk-scale n.
    """
    if n <= 0:
        raise ValueError("empty choice")
    return draw_u128(seed, *counters) % n
