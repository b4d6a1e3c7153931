"""Sequence-alignment kernels shared by the music and trajectory measures.

Both kernels run over arbitrary token sequences with a pluggable pairwise
substitution cost. The global kernel is a minimum-cost Needleman-Wunsch
table; the local kernel is a Smith-Waterman-style maximum-score table whose
per-pair reward is ``reward_offset - cost`` with a zero floor per cell, and
its score is folded into a bounded distance 1/(1+score).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Sequence


@dataclass(frozen=True)
class SubstitutionModel:
    """Pairwise substitution costs plus gap pricing for the two kernels.

    ``reward_offset`` is the local-alignment reward baseline: aligning a pair
    of tokens scores ``reward_offset - cost(a, b)``. It defaults to the gap
    penalty, so a pair is worth aligning exactly when substituting it is
    cheaper than gapping it.
    """

    cost: Callable[[Any, Any], float]
    gap: float
    reward_offset: float | None = None

    def __post_init__(self):
        if self.gap < 0:
            raise ValueError("gap penalty must be non-negative")
        if self.reward_offset is None:
            object.__setattr__(self, "reward_offset", float(self.gap))


def global_alignment(s: Sequence, t: Sequence, model: SubstitutionModel) -> float:
    """Minimum total cost over end-to-end alignments of s with t."""
    cost = model.cost
    gap = model.gap
    prev = [0.0] * (len(t) + 1)
    for j in range(1, len(t) + 1):
        prev[j] = prev[j - 1] + gap
    for a in s:
        cur = [prev[0] + gap] + [0.0] * len(t)
        for j, b in enumerate(t, 1):
            cur[j] = min(prev[j - 1] + cost(a, b), prev[j] + gap, cur[j - 1] + gap)
        prev = cur
    return prev[-1]


def local_alignment_score(s: Sequence, t: Sequence, model: SubstitutionModel) -> float:
    """Best local-alignment score H* (zero floor per cell, >= 0)."""
    cost = model.cost
    gap = model.gap
    offset = model.reward_offset
    best = 0.0
    prev = [0.0] * (len(t) + 1)
    for a in s:
        cur = [0.0] * (len(t) + 1)
        for j, b in enumerate(t, 1):
            h = max(0.0, prev[j - 1] + (offset - cost(a, b)),
                    prev[j] - gap, cur[j - 1] - gap)
            cur[j] = h
            if h > best:
                best = h
        prev = cur
    return best


def local_alignment(s: Sequence, t: Sequence, model: SubstitutionModel) -> float:
    """Local-alignment distance 1/(1+H*) in (0, 1].

    Identical non-trivial sequences score below 1; sequences with no
    rewarding pair at all sit exactly at 1.
    """
    return 1.0 / (1.0 + local_alignment_score(s, t, model))
