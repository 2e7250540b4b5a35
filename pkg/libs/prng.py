"""
Portable 64-bit linear congruential stream (Knuth's MMIX constants).

Used where a fixed pseudo-random table must be bit-identical across
platforms and languages, which numpy / torch generators do not promise.
"""
import numpy as np

LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
_MASK64 = (1 << 64) - 1


def lcg64_uniform(seed: int, count: int) -> np.ndarray:
    """
    Returns `count` floats in [0, 1): state <- (a * state + c) mod 2^64, value = top 53 bits / 2^53.
    """
    state = seed & _MASK64
    values = np.empty(count, dtype=np.float64)
    for i in range(count):
        state = (state * LCG_MULTIPLIER + LCG_INCREMENT) & _MASK64
        values[i] = (state >> 11) / float(1 << 53)
    return values
