"""Melodic-segment similarity: alignment over pitches plus five bag overlaps.

A segment is a pitch sequence (MIDI numbers) with parallel note durations in
beats. The composite distance combines a global and a local pitch alignment
with bag distances over rhythm, interval, step, pitch, and pitch-class
content:

    score_alignment = global^2 + 2 * local^2
    score_bag       = rhythm^2 + interval^2 + step^2 + pitch^2 + pitch_class^2
    distance        = sqrt(10 * score_bag + score_alignment)

The measure is symmetric and non-negative but intentionally not a metric:
the local-alignment term can violate the triangle inequality, and the
self-distance of a segment is a small positive number, not zero.
"""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass
from math import sqrt
from typing import NamedTuple, Sequence

from repsel.distances.alignment import (
    SubstitutionModel,
    global_alignment,
    local_alignment,
)
from repsel.distances.bags import bag_distance


@functools.lru_cache(maxsize=None)
def music_substitution_cost(a: int, b: int) -> float:
    """Cost of swapping two MIDI pitches in an alignment.

    Identical pitches swap for free; a third (3-4 semitones) or a perfect
    fifth (7 semitones) costs 1; anything else attenuates exponentially
    with the semitone gap.
    """
    if a == b:
        return 0.0
    diff = abs(a - b)
    if diff in (3, 4) or diff == 7:
        return 1.0
    return 1.3 ** (diff / 4)


class MusicFeatures(NamedTuple):
    pitch: Counter
    pitch_class: Counter
    interval: Counter
    step: Counter
    rhythm: Counter


class MusicSegment:
    """A melodic fragment: parallel pitch and duration sequences.

    ``transpose`` is an optional integer offset applied to every pitch at
    ingestion (e.g., to move the segment to C); no key detection happens
    here. The five derived bags are computed once and cached.
    """

    __slots__ = ("pitches", "durations", "_features")

    def __init__(self, pitches: Sequence[int], durations: Sequence[float],
                 transpose: int = 0):
        pitches = tuple(int(p) + int(transpose) for p in pitches)
        durations = tuple(float(d) for d in durations)
        if len(pitches) == 0:
            raise ValueError("a segment needs at least one note")
        if len(pitches) != len(durations):
            raise ValueError("pitches and durations must have equal length")
        if any(d <= 0 for d in durations):
            raise ValueError("durations must be positive")
        self.pitches = pitches
        self.durations = durations
        self._features = None

    def __len__(self):
        return len(self.pitches)

    def __repr__(self):
        return f"MusicSegment(pitches={list(self.pitches)}, durations={list(self.durations)})"

    @property
    def features(self) -> MusicFeatures:
        if self._features is None:
            self._features = music_features(self)
        return self._features


def music_features(segment: MusicSegment) -> MusicFeatures:
    """The five bags of a segment; a one-note segment has empty pair bags."""
    pitches = segment.pitches
    durations = segment.durations
    return MusicFeatures(
        pitch=Counter(pitches),
        pitch_class=Counter(p % 12 for p in pitches),
        interval=Counter(abs(b - a) for a, b in zip(pitches, pitches[1:])),
        step=Counter(b - a for a, b in zip(pitches, pitches[1:])),
        rhythm=Counter(zip(durations, durations[1:])),
    )


@dataclass(frozen=True)
class MusicDistanceConfig:
    """Weights and alignment pricing for the composite music distance."""

    gap: float = 1.5
    reward_offset: float | None = None  # None -> gap
    bag_weight: float = 10.0
    local_weight: float = 2.0

    def substitution_model(self) -> SubstitutionModel:
        return SubstitutionModel(cost=music_substitution_cost, gap=self.gap,
                                 reward_offset=self.reward_offset)


DEFAULT_MUSIC_CONFIG = MusicDistanceConfig()


def music_distance(a: MusicSegment, b: MusicSegment,
                   config: MusicDistanceConfig = DEFAULT_MUSIC_CONFIG) -> float:
    model = config.substitution_model()
    score_global = global_alignment(a.pitches, b.pitches, model)
    score_local = local_alignment(a.pitches, b.pitches, model)
    fa = a.features
    fb = b.features
    score_bag = (bag_distance(fa.rhythm, fb.rhythm) ** 2
                 + bag_distance(fa.interval, fb.interval) ** 2
                 + bag_distance(fa.step, fb.step) ** 2
                 + bag_distance(fa.pitch, fb.pitch) ** 2
                 + bag_distance(fa.pitch_class, fb.pitch_class) ** 2)
    score_alignment = score_global ** 2 + config.local_weight * score_local ** 2
    return sqrt(config.bag_weight * score_bag + score_alignment)
