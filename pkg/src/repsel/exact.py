"""Brute-force oracles for small instances.

Exhaustive ground truth for the heuristics: the exact minimum delta-cover,
the covering number, and the optimal max-distance for a fixed representative
count. Enumeration walks subsets by increasing size, then lexicographically,
so the reported witness is the lexicographically smallest optimum. Every
result is re-verified by an independent per-sample coverage check before it
is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from repsel.core import Dataset, DistanceOracle, NoCoverError

DEFAULT_SIZE_CAP = 20


@dataclass
class ExactResult:
    optimum_size: int | None
    optimum_value: float | None
    witness: list[int]
    explored: int


class SizeCapExceeded(ValueError):
    """The instance is larger than the configured enumeration cap."""


def _check_cap(n: int, size_cap: int):
    if n > size_cap:
        raise SizeCapExceeded(
            f"instance size {n} exceeds the enumeration cap {size_cap}")


def _coverage_masks(oracle: DistanceOracle, n: int, delta: float) -> list[int]:
    """Per-candidate bitmask of the samples it covers within delta."""
    block = oracle.block(range(n), range(n))
    masks = []
    for c in range(n):
        mask = 0
        for x in range(n):
            if block[x, c] <= delta:
                mask |= 1 << x
        masks.append(mask)
    return masks


def _verify_cover(witness, oracle: DistanceOracle, n: int, delta: float):
    # Independent of the bitmask path: plain per-sample oracle queries.
    for x in range(n):
        if not any(oracle.distance(x, c) <= delta for c in witness):
            raise AssertionError(
                f"oracle produced witness {witness} that fails to cover sample {x}")


def exact_min_cover(dataset: Dataset, oracle: DistanceOracle, delta: float,
                    size_cap: int = DEFAULT_SIZE_CAP) -> ExactResult:
    """Smallest representative set covering every sample within delta."""
    n = dataset.size
    _check_cap(n, size_cap)
    if n == 0:
        return ExactResult(0, None, [], 0)
    masks = _coverage_masks(oracle, n, delta)
    full = (1 << n) - 1
    covered_somehow = 0
    for mask in masks:
        covered_somehow |= mask
    if covered_somehow != full:
        raise NoCoverError(
            "some sample is beyond delta of every candidate (its own "
            "self-distance included); no cover exists")
    explored = 0
    for size in range(1, n + 1):
        for combo in combinations(range(n), size):
            explored += 1
            mask = 0
            for c in combo:
                mask |= masks[c]
            if mask == full:
                witness = list(combo)
                _verify_cover(witness, oracle, n, delta)
                return ExactResult(size, None, witness, explored)
    raise AssertionError("unreachable: the full set always covers after the pre-check")


def covering_number(dataset: Dataset, oracle: DistanceOracle, x: float,
                    size_cap: int = DEFAULT_SIZE_CAP) -> int:
    """Minimum number of representatives meeting distance criterion x."""
    return exact_min_cover(dataset, oracle, x, size_cap).optimum_size


def opt_max_for_k(dataset: Dataset, oracle: DistanceOracle, k: int,
                  size_cap: int = DEFAULT_SIZE_CAP) -> ExactResult:
    """Minimum over all size-k subsets of the max nearest-representative distance."""
    n = dataset.size
    _check_cap(n, size_cap)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range for dataset of size {n}")
    block = oracle.block(range(n), range(n))
    best_value = None
    best_witness = None
    explored = 0
    for combo in combinations(range(n), k):
        explored += 1
        value = float(block[:, combo].min(axis=1).max())
        if best_value is None or value < best_value:
            best_value = value
            best_witness = list(combo)
    # Independent re-check through scalar oracle queries.
    recomputed = max(min(oracle.distance(x, c) for c in best_witness)
                     for x in range(n))
    if recomputed != best_value:
        raise AssertionError("opt_max_for_k witness failed independent re-check")
    return ExactResult(None, best_value, best_witness, explored)
