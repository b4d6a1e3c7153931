"""Movement-segment similarity for fixed-timestep 2-D trajectories.

Trajectories are compared as contours: a global and a local alignment over
the raw coordinate sequences (substitution cost = point-to-point Euclidean
distance, heavily priced gaps), a bag distance over quantised movement-turn
tokens, and a coarse comparison of total path length and net heading:

    score_align    = global^2 + 2.5 * local^2
    score_overall  = delta_length^2 + (10 * delta_angle)^2
    distance       = sqrt(100 * score_bag + score_align) + score_overall

Every trajectory is translated so it starts at the origin; an optional
rotation (e.g., to face a common goal) can be supplied at ingestion.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from repsel.distances.alignment import (
    SubstitutionModel,
    global_alignment,
    local_alignment,
)
from repsel.distances.bags import bag_distance

def turn_bin(angle_deg: float) -> str:
    """Bin a clockwise-positive turn angle in (-180, 180] degrees.

    Bins are right-closed, so a +90 degree right turn lands in upper_right.
    """
    if angle_deg <= -150.0:
        return "backward"
    if angle_deg <= -90.0:
        return "lower_left"
    if angle_deg <= -30.0:
        return "upper_left"
    if angle_deg <= 30.0:
        return "forward"
    if angle_deg <= 90.0:
        return "upper_right"
    if angle_deg <= 150.0:
        return "lower_right"
    return "backward"


class TrajectoryFeatures(NamedTuple):
    movement_turn_bag: Counter
    total_length: float
    net_angle: float


class Trajectory:
    """A fixed-timestep 2-D coordinate sequence, origin-normalised."""

    __slots__ = ("points", "_point_list", "_feature_cache")

    def __init__(self, points, rotate: float | None = None):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("trajectory points must be an (n, 2) array")
        if pts.shape[0] < 2:
            raise ValueError("a trajectory needs at least two points")
        pts = pts - pts[0]
        if rotate is not None:
            c, s = math.cos(rotate), math.sin(rotate)
            pts = pts @ np.array([[c, s], [-s, c]])
        self.points = pts
        self._point_list = [(float(x), float(y)) for x, y in pts]
        self._feature_cache = {}

    def __len__(self):
        return len(self._point_list)

    def __repr__(self):
        return f"Trajectory({self._point_list!r})"

    @property
    def point_list(self) -> list[tuple[float, float]]:
        return self._point_list

    def features(self, resolution: float = 5.0) -> TrajectoryFeatures:
        feats = self._feature_cache.get(resolution)
        if feats is None:
            feats = trajectory_features(self, resolution)
            self._feature_cache[resolution] = feats
        return feats


def _point_cost(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def trajectory_features(trajectory: Trajectory,
                        resolution: float = 5.0) -> TrajectoryFeatures:
    """Movement-turn bag, total path length, and net heading.

    Each consecutive movement pair emits one (quantised length, turn bin)
    token: the first movement's length rounded half-up to the nearest
    ``resolution`` metres, and the clockwise-positive turn from the first
    movement to the second. Pairs touching a zero-length movement emit
    nothing (the turn is undefined). The net angle is the heading of the
    overall displacement, 0 when the trajectory returns to its origin.
    """
    pts = trajectory.point_list
    moves = [(b[0] - a[0], b[1] - a[1]) for a, b in zip(pts, pts[1:])]
    lengths = [math.hypot(mx, my) for mx, my in moves]
    bag: Counter = Counter()
    for (m1, l1), (m2, l2) in zip(zip(moves, lengths), zip(moves[1:], lengths[1:])):
        if l1 == 0.0 or l2 == 0.0:
            continue
        cross = m1[0] * m2[1] - m1[1] * m2[0]
        dot = m1[0] * m2[0] + m1[1] * m2[1]
        deg = -math.degrees(math.atan2(cross, dot))
        if deg <= -180.0:
            deg += 360.0
        quantised = math.floor(l1 / resolution + 0.5) * resolution
        bag[(quantised, turn_bin(deg))] += 1
    total = sum(lengths)
    dx, dy = pts[-1][0] - pts[0][0], pts[-1][1] - pts[0][1]
    net = 0.0 if (dx == 0.0 and dy == 0.0) else math.atan2(dy, dx)
    return TrajectoryFeatures(bag, total, net)


@dataclass(frozen=True)
class TrajectoryDistanceConfig:
    """Weights and alignment pricing for the composite trajectory distance."""

    gap: float = 100.0
    reward_offset: float | None = None  # None -> gap
    bag_weight: float = 100.0
    local_weight: float = 2.5
    angle_weight: float = 10.0
    resolution: float = 5.0

    def substitution_model(self) -> SubstitutionModel:
        return SubstitutionModel(cost=_point_cost, gap=self.gap,
                                 reward_offset=self.reward_offset)


DEFAULT_TRAJECTORY_CONFIG = TrajectoryDistanceConfig()


def trajectory_distance(a: Trajectory, b: Trajectory,
                        config: TrajectoryDistanceConfig = DEFAULT_TRAJECTORY_CONFIG) -> float:
    if len(a) != len(b):
        raise ValueError(f"trajectory length mismatch: {len(a)} vs {len(b)}")
    model = config.substitution_model()
    score_global = global_alignment(a.point_list, b.point_list, model)
    score_local = local_alignment(a.point_list, b.point_list, model)
    fa = a.features(config.resolution)
    fb = b.features(config.resolution)
    score_bag = bag_distance(fa.movement_turn_bag, fb.movement_turn_bag) ** 2
    delta_length = abs(fa.total_length - fb.total_length)
    delta_angle = abs(fa.net_angle - fb.net_angle)
    if delta_angle > math.pi:
        delta_angle = 2.0 * math.pi - delta_angle
    score_align = score_global ** 2 + config.local_weight * score_local ** 2
    score_overall = delta_length ** 2 + (config.angle_weight * delta_angle) ** 2
    return math.sqrt(config.bag_weight * score_bag + score_align) + score_overall
