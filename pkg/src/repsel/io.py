"""File formats and deterministic serialisation.

Input formats (chosen minimal and diff-friendly):

* points       - headerless CSV of reals, one row per sample
* precomputed  - square CSV matrix, entry (i, j) = d(i -> j)
* sequences    - JSON lines: {"id": ..., "pitches": [int, ...],
                 "durations": [float, ...], "transpose": optional int}
* trajectories - JSON lines: {"id": ..., "points": [[x, y], ...],
                 "rotate": optional radians}

The optional "id" field is a human label only; samples are always addressed
by their position in the file.

All floating-point output is printed with 17 significant digits so values
round-trip exactly, and writers emit the full document in one atomic write
(no partial output on failure). Every CLI output gets a RunManifest: embedded
in solution JSON, and serialised alongside CSV outputs as
``<output>.manifest.json``.
"""

from __future__ import annotations

import json
import math
import os
from typing import Any

import numpy as np

from repsel import __version__
from repsel.core import Dataset
from repsel.distances import MusicSegment, Trajectory


class ParseError(ValueError):
    """An input file failed to parse; carries the 1-based line number."""

    def __init__(self, path, line: int, message: str):
        self.path = str(path)
        self.line = line
        self.message = message
        super().__init__(f"{self.path}:{line}: {message}")


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------

def _read_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read().splitlines()


def load_points_csv(path) -> Dataset:
    rows = []
    width = None
    lineno = 0
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line.strip():
            continue
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ParseError(path, lineno,
                             f"expected {width} columns, found {len(cells)}")
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise ParseError(path, lineno, str(exc)) from None
    if not rows:
        return Dataset.points(np.empty((0, 1)))
    return Dataset.points(np.asarray(rows, dtype=float))


def load_matrix_csv(path) -> tuple[Dataset, np.ndarray]:
    dataset = load_points_csv(path)
    matrix = dataset.items
    if matrix.shape[0] != matrix.shape[1]:
        raise ParseError(path, matrix.shape[0],
                         f"matrix must be square, got {matrix.shape[0]}x{matrix.shape[1]}")
    return Dataset.opaque(matrix.shape[0]), matrix


def _parse_jsonl(path):
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(path, lineno, f"invalid JSON: {exc.msg}") from None
        if not isinstance(record, dict):
            raise ParseError(path, lineno, "each line must be a JSON object")
        yield lineno, record


def load_sequences_jsonl(path) -> Dataset:
    segments = []
    for lineno, record in _parse_jsonl(path):
        try:
            segments.append(MusicSegment(
                record["pitches"], record["durations"],
                transpose=int(record.get("transpose", 0))))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(path, lineno, f"bad segment: {exc}") from None
    return Dataset.sequences(segments)


def load_trajectories_jsonl(path) -> Dataset:
    trajectories = []
    for lineno, record in _parse_jsonl(path):
        try:
            rotate = record.get("rotate")
            trajectories.append(Trajectory(
                record["points"],
                rotate=float(rotate) if rotate is not None else None))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(path, lineno, f"bad trajectory: {exc}") from None
    return Dataset.trajectories(trajectories)


# ---------------------------------------------------------------------------
# deterministic emission
# ---------------------------------------------------------------------------

def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError("refusing to serialise a non-finite float")
    return format(x, ".17g")


def _render_json(value: Any, indent: int, level: int) -> str:
    pad = " " * (indent * level)
    inner = " " * (indent * (level + 1))
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return fmt_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [_render_json(v, indent, level + 1) for v in value]
        return "[\n" + ",\n".join(inner + i for i in items) + "\n" + pad + "]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_render_json(v, indent, level + 1)}"
                 for k, v in value.items()]
        return "{\n" + ",\n".join(inner + i for i in items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialise {type(value).__name__}")


def dumps_json(value: Any, indent: int = 2) -> str:
    """Deterministic JSON: insertion-ordered keys, 17-significant-digit floats."""
    return _render_json(value, indent, 0) + "\n"


def format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return fmt_float(value)
    if value is None:
        return ""
    return str(value)


def dumps_csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def write_text(path, text: str):
    """Single atomic write: the full document or nothing."""
    tmp = f"{path}.tmp-{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# manifests and solution files
# ---------------------------------------------------------------------------

def build_manifest(command: str, config: dict, input_path, output_path) -> dict:
    return {
        "command": command,
        "config": config,
        "input": str(input_path) if input_path is not None else None,
        "output": str(output_path) if output_path is not None else None,
        "version": __version__,
    }


def manifest_sidecar_path(output_path) -> str:
    return f"{output_path}.manifest.json"


def write_manifest_sidecar(output_path, manifest: dict):
    write_text(manifest_sidecar_path(output_path), dumps_json(manifest))


def solution_document(solution, algorithm: str, manifest: dict,
                      timings: bool = False) -> dict:
    stats = solution.stats
    return {
        "delta": solution.delta,
        "algorithm": algorithm,
        "representatives": list(solution.representatives),
        "assignment": {str(s): r for s, r in solution.assignment.items()},
        "stats": {
            "iterations": stats.iterations,
            "distance_evals": stats.distance_evaluations,
            "wall_ms": stats.wall_time * 1000.0 if timings else None,
        },
        "manifest": manifest,
    }


def read_solution(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            document = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(path, exc.lineno, f"invalid JSON: {exc.msg}") from None
    for key in ("representatives", "assignment"):
        if key not in document:
            raise ParseError(path, 1, f"solution file missing {key!r}")
    return document
