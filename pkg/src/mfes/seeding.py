"""Deterministic random-stream derivation.

Every stochastic component draws from a stream derived from a master seed and
a path of small integers (iteration index, purpose tag, candidate index, ...)
via :class:`numpy.random.SeedSequence`. Derived streams are independent and
reproducible across platforms, so runs are bit-identical for a fixed config.
"""

from __future__ import annotations

import numpy as np


def seed_sequence(*path: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(p) for p in path])


def rng_from(*path: int) -> np.random.Generator:
    """Generator seeded from an integer path."""
    return np.random.default_rng(seed_sequence(*path))


def child_seed(*path: int) -> int:
    """A single integer seed derived from a path, for APIs that take ints."""
    return int(seed_sequence(*path).generate_state(1)[0])
