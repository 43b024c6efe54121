"""Seeded random streams.

Every random draw in the package goes through :func:`make_rng`, which builds a
counter-based Philox generator keyed by ``(seed, *stream)``. Distinct stream
keys give statistically independent substreams, and the same key always gives
the same bits.
"""
from __future__ import annotations

import os

import numpy as np

SEED_ENV_VAR = "JUNTA_LAB_SEED"
_SEED_MAX = 2**64 - 1


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= _SEED_MAX:
        raise ValueError(f"seed must be in [0, 2**64), got {seed}")
    return seed


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def as_rng(seed_or_rng: int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return make_rng(seed_or_rng)


def default_seed(fallback: int = 0) -> int:
    value = os.environ.get(SEED_ENV_VAR)
    if value is None or value.strip() == "":
        return fallback
    return check_seed(int(value))
