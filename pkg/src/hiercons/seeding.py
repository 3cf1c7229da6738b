"""Deterministic seed derivation.

All randomness in the package flows from a single user-supplied seed. Child
seeds are derived with ``numpy.random.SeedSequence.spawn``, which is a
splittable scheme: the i-th child depends only on the parent seed and i, so
results do not depend on how work is distributed across workers.
"""

from __future__ import annotations

import numpy as np


def as_seed_sequence(seed) -> np.random.SeedSequence:
    """Coerce an int / SeedSequence into a SeedSequence (ints pass through)."""
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def child(seed, i: int) -> np.random.SeedSequence:
    """The i-th child of ``seed``; a pure function of ``(seed, i)``."""
    parent = as_seed_sequence(seed)
    return np.random.SeedSequence(entropy=parent.entropy,
                                  spawn_key=parent.spawn_key + (i,))


def spawn(seed, k: int) -> list[np.random.SeedSequence]:
    """Derive ``k`` independent child seed sequences from ``seed``.

    The i-th child depends only on ``(seed, i)``, so repeated or partial
    spawns are consistent with each other.
    """
    return [child(seed, i) for i in range(k)]


def rng_from(seed) -> np.random.Generator:
    """Build a ``numpy.random.Generator`` from an int or SeedSequence."""
    return np.random.default_rng(as_seed_sequence(seed))
