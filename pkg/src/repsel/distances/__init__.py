"""Concrete dissimilarity measures: Euclidean, bags, alignment kernels, and
the composite music and trajectory distances."""

from repsel.distances.alignment import (
    SubstitutionModel,
    global_alignment,
    local_alignment,
    local_alignment_score,
)
from repsel.distances.bags import Bag, bag_distance
from repsel.distances.config import load_distance_configs
from repsel.distances.music import (
    DEFAULT_MUSIC_CONFIG,
    MusicDistanceConfig,
    MusicFeatures,
    MusicSegment,
    music_distance,
    music_features,
    music_substitution_cost,
)
from repsel.distances.points import euclidean_distance, euclidean_rows
from repsel.distances.trajectory import (
    DEFAULT_TRAJECTORY_CONFIG,
    Trajectory,
    TrajectoryDistanceConfig,
    TrajectoryFeatures,
    trajectory_distance,
    trajectory_features,
    turn_bin,
)

__all__ = [
    "Bag",
    "DEFAULT_MUSIC_CONFIG",
    "DEFAULT_TRAJECTORY_CONFIG",
    "MusicDistanceConfig",
    "MusicFeatures",
    "MusicSegment",
    "SubstitutionModel",
    "Trajectory",
    "TrajectoryDistanceConfig",
    "TrajectoryFeatures",
    "bag_distance",
    "euclidean_distance",
    "euclidean_rows",
    "global_alignment",
    "load_distance_configs",
    "local_alignment",
    "local_alignment_score",
    "music_distance",
    "music_features",
    "music_substitution_cost",
    "trajectory_distance",
    "trajectory_features",
    "turn_bin",
]
