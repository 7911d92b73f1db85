"""Seed derivation for order-independent Monte Carlo.

Every random stream is a Philox (counter-based) generator keyed by a
``SeedSequence`` built from the master seed plus a tuple of integer tags
(stream purpose, trial or block index).  No state is shared between
streams, so trials can be generated in any order or on any thread.
"""

import numpy as np

from ._validation import check_seed

# stream purposes, kept stable across versions so old manifests replay
GRAPH_STREAM = 1
PAIR_DIRECT_STREAM = 2
PAIR_CONDITIONAL_STREAM = 3


def stream(seed, *tags):
    """Return a fresh generator that is a pure function of ``(seed, *tags)``."""
    seed = check_seed(seed)
    entropy = [seed & 0xFFFFFFFF, seed >> 32, *[int(t) for t in tags]]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def fresh_seed():
    """Draw a master seed from OS entropy (only used behind an explicit flag)."""
    return int(np.random.SeedSequence().entropy % 2**64)
