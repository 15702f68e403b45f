"""Reproducible random streams for outcome sampling.

Streams are built on numpy's Philox bit generator, which is counter based:
the (seed, stream) key pair fully determines the sequence.  Parallel
consumers carve out disjoint streams by index without any coordination,
and the same key reproduces the same draws on every platform.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np


def make_stream(seed: int, stream: int = 0) -> np.random.Generator:
    """Return the generator for stream ``stream`` of the given seed."""
    key = np.array([seed, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_index(probabilities: Sequence[float], gen: np.random.Generator) -> int:
    """Inverse-CDF draw over an ordered probability list.

    The list order is part of the contract: the same uniform draw always
    selects the same index, which keeps sampling reproducible across runs.
    """
    u = gen.random()
    acc = 0.0
    for i, p in enumerate(probabilities):
        acc += p
        if u < acc:
            return i
    # Guard against the cumulative sum landing a hair under 1.0.
    return len(probabilities) - 1
