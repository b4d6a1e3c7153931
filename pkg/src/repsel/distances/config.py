"""Loading distance-model parameters from a configuration file.

The file is INI-style (parsed with :mod:`configparser`): a ``[music]`` and/or
``[trajectory]`` section whose keys match the fields of
:class:`MusicDistanceConfig` and :class:`TrajectoryDistanceConfig`. Missing
sections or keys fall back to the built-in defaults.

Example::

    [music]
    gap = 1.5
    bag_weight = 10

    [trajectory]
    gap = 100
    resolution = 5
"""

from __future__ import annotations

import configparser
from dataclasses import fields, replace

from repsel.distances.music import DEFAULT_MUSIC_CONFIG, MusicDistanceConfig
from repsel.distances.trajectory import (
    DEFAULT_TRAJECTORY_CONFIG,
    TrajectoryDistanceConfig,
)


def _apply_section(parser, section, default):
    if not parser.has_section(section):
        return default
    known = {f.name for f in fields(default)}
    overrides = {}
    for key, raw in parser.items(section):
        if key not in known:
            raise ValueError(f"unknown key {key!r} in [{section}]")
        overrides[key] = float(raw)
    return replace(default, **overrides)


def load_distance_configs(path) -> tuple[MusicDistanceConfig, TrajectoryDistanceConfig]:
    parser = configparser.ConfigParser()
    parser.optionxform = str
    with open(path, "r", encoding="utf-8") as fh:
        parser.read_file(fh)
    music = _apply_section(parser, "music", DEFAULT_MUSIC_CONFIG)
    trajectory = _apply_section(parser, "trajectory", DEFAULT_TRAJECTORY_CONFIG)
    return music, trajectory
