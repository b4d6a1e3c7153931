"""Deterministic, platform-stable derivation of per-component RNG streams.

Every randomised component draws from a Generator seeded by a SeedSequence
built from the user seed plus fixed integer tags, so independent components
never share a stream and results reproduce across platforms.
"""

from __future__ import annotations

import numpy as np

TAG_KCENTERS_START = 1
TAG_KMEDOIDS_INIT = 2
TAG_MIN_K_SEARCH = 3
TAG_SCAN_SHUFFLE = 4
TAG_GAUSSIAN_GEN = 5
TAG_BENCH_SUBSET = 6
TAG_BENCH_ALGO = 7
TAG_STABILITY = 8


def seed_sequence(seed: int, *keys: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=(int(seed),) + tuple(int(k) for k in keys))


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(seed_sequence(seed, *keys))


def shuffled_scan_order(n: int, seed: int, *keys: int) -> list[int]:
    """Seeded permutation of 0..n-1 for use as a scan order."""
    rng = make_rng(seed, TAG_SCAN_SHUFFLE, *keys)
    return [int(i) for i in rng.permutation(n)]
