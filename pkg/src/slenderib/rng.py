"""Deterministic random streams for experiments.

Every random draw in the package goes through a counter-based Philox
generator seeded from (seed, stream_id). Streams with different ids are
statistically independent, so an experiment can hand stream 0 to one
consumer (say, force signs) and stream 1 to another (orientations)
without the two sharing state; results then depend only on the seed, not
on evaluation order or thread count.
"""

from __future__ import annotations

import numpy as np


def rng_stream(seed: int, stream_id: int = 0) -> np.random.Generator:
    """Generator for the given (seed, stream) pair."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream_id),))
    return np.random.Generator(np.random.Philox(ss))
