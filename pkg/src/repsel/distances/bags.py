"""Multiset ("bag") distance: symmetric difference size over union size."""

from __future__ import annotations

from collections import Counter

Bag = Counter


def bag_distance(a: Counter, b: Counter) -> float:
    """|a △ b| / |a ∪ b| with multiset semantics, in [0, 1].

    Union takes the per-token maximum multiplicity, the symmetric difference
    the per-token absolute multiplicity gap. Two empty bags are at distance 0.
    """
    tokens = a.keys() | b.keys()
    union = sum(max(a[t], b[t]) for t in tokens)
    if union == 0:
        return 0.0
    sym = sum(abs(a[t] - b[t]) for t in tokens)
    return sym / union
