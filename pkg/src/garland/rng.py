"""Seeded, counter-based random streams."""

from __future__ import annotations

import os

import numpy as np

SEED_ENV = "GARLAND_SEED"


def resolve_seed(seed=None) -> int:
    """Explicit seed, else ``$GARLAND_SEED``, else 0."""
    if seed is not None:
        return int(seed)
    env = os.environ.get(SEED_ENV)
    return int(env) if env not in (None, "") else 0


def make_rng(seed=None, *key: int) -> np.random.Generator:
    """Philox stream for ``seed``; extra ``key`` integers select an independent substream."""
    ss = np.random.SeedSequence(resolve_seed(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
