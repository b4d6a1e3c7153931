"""Dataset and distance-oracle primitives shared by every selection algorithm.

Samples are addressed by their index in the dataset's canonical (ingestion)
order; shuffles are expressed as scan-order permutations, never as reindexing.
All dissimilarity access goes through :class:`DistanceOracle`, which enforces
the directional convention d(sample_being_covered, candidate_representative),
memoises evaluations, and never assumes symmetry or zero self-distance.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

SampleId = int

DATASET_KINDS = ("points", "sequences", "trajectories", "opaque")


class DistanceContractError(ValueError):
    """A distance source produced an illegal value (negative or non-finite)."""


class NoCoverError(RuntimeError):
    """No representative set can satisfy the distance criterion."""


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of samples of a single kind.

    ``items`` is an (n, d) float array for points, a sequence of
    :class:`~repsel.distances.music.MusicSegment` or
    :class:`~repsel.distances.trajectory.Trajectory` objects for the
    sequence kinds, and ``None`` for opaque datasets (which exist only
    through a precomputed matrix).
    """

    kind: str
    items: object
    size: int

    def __post_init__(self):
        if self.kind not in DATASET_KINDS:
            raise ValueError(f"unknown dataset kind {self.kind!r}")
        if self.size < 0:
            raise ValueError("dataset size must be non-negative")

    @classmethod
    def points(cls, coords) -> "Dataset":
        coords = np.asarray(coords, dtype=float)
        if coords.ndim == 1:
            coords = coords.reshape(-1, 1)
        if coords.ndim != 2:
            raise ValueError("point data must be a 1-D or 2-D array")
        return cls("points", coords, coords.shape[0])

    @classmethod
    def sequences(cls, segments) -> "Dataset":
        segments = list(segments)
        return cls("sequences", segments, len(segments))

    @classmethod
    def trajectories(cls, trajectories) -> "Dataset":
        trajectories = list(trajectories)
        return cls("trajectories", trajectories, len(trajectories))

    @classmethod
    def opaque(cls, size: int) -> "Dataset":
        return cls("opaque", None, size)

    def subset(self, ids: Sequence[int]) -> "Dataset":
        """New dataset holding the given samples, re-indexed in the given order."""
        ids = [int(i) for i in ids]
        for i in ids:
            if not 0 <= i < self.size:
                raise IndexError(f"sample id {i} out of range for size {self.size}")
        if self.kind == "points":
            return Dataset("points", self.items[ids], len(ids))
        if self.kind == "opaque":
            raise ValueError("opaque datasets can only be subset through their matrix")
        return Dataset(self.kind, [self.items[i] for i in ids], len(ids))


class DistanceOracle:
    """Sole access path to pairwise dissimilarities d(from, to).

    Wraps either a precomputed square matrix or a deterministic pairwise
    function over the dataset items. Every result is memoised so repeated
    queries are bit-identical and free; ``eval_count`` counts underlying
    evaluations only, never cache hits. Symmetry and d(a, a) = 0 are *not*
    assumed: the first argument is always the sample being covered, the
    second the candidate representative.
    """

    def __init__(self, size: int, *, matrix=None, func=None, items=None,
                 row_func=None, cache_capacity: int | None = None):
        self.size = int(size)
        self._matrix = None
        self._func = func
        self._items = items
        self._row_func = row_func
        self._eval_count = 0
        if matrix is not None:
            matrix = np.asarray(matrix, dtype=float)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise ValueError("distance matrix must be square")
            if matrix.shape[0] != self.size:
                raise ValueError("matrix size does not match dataset size")
            if not np.all(np.isfinite(matrix)) or np.any(matrix < 0):
                raise DistanceContractError("distance matrix entries must be finite and >= 0")
            self._matrix = matrix
            # The matrix itself is the value store; only first-touch bookkeeping
            # is needed, so a boolean mask replaces the pair cache.
            self._seen = np.zeros(matrix.shape, dtype=bool)
            self._cache = None
        else:
            if func is None and row_func is None:
                raise ValueError("either a matrix or a distance function is required")
            self._seen = None
            if cache_capacity is not None and cache_capacity <= 0:
                raise ValueError("cache_capacity must be positive when given")
            self._capacity = cache_capacity
            self._cache = OrderedDict() if cache_capacity else {}

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_matrix(cls, matrix) -> "DistanceOracle":
        matrix = np.asarray(matrix, dtype=float)
        return cls(matrix.shape[0] if matrix.ndim == 2 else 0, matrix=matrix)

    @classmethod
    def from_function(cls, func: Callable, dataset: Dataset,
                      cache_capacity: int | None = None) -> "DistanceOracle":
        if dataset.kind == "opaque":
            raise ValueError("opaque datasets require a precomputed matrix")
        return cls(dataset.size, func=func, items=dataset.items,
                   cache_capacity=cache_capacity)

    @classmethod
    def euclidean(cls, dataset: Dataset, cache_capacity: int | None = None) -> "DistanceOracle":
        """Vectorised Euclidean oracle over a points dataset."""
        from repsel.distances.points import euclidean_rows

        if dataset.kind != "points":
            raise ValueError("euclidean oracle requires a points dataset")
        coords = dataset.items

        def rows(from_ids, to_ids):
            return euclidean_rows(coords[from_ids], coords[to_ids])

        return cls(dataset.size, row_func=rows, cache_capacity=cache_capacity)

    # -- internals ---------------------------------------------------------

    def _check_id(self, i: int) -> int:
        i = int(i)
        if not 0 <= i < self.size:
            raise IndexError(f"sample id {i} out of range for size {self.size}")
        return i

    def _evaluate_pairs(self, pairs: list[tuple[int, int]]) -> list[float]:
        """Evaluate uncached pairs through the underlying source."""
        if self._row_func is not None:
            froms = np.fromiter((p[0] for p in pairs), dtype=np.intp, count=len(pairs))
            tos = np.fromiter((p[1] for p in pairs), dtype=np.intp, count=len(pairs))
            values = self._row_func(froms, tos)
            out = [float(v) for v in values]
        else:
            items = self._items
            out = [float(self._func(items[a], items[b])) for a, b in pairs]
        for v in out:
            if not (v >= 0.0) or not np.isfinite(v):
                raise DistanceContractError(f"distance function returned illegal value {v!r}")
        self._eval_count += len(pairs)
        return out

    def _cache_get(self, key):
        cache = self._cache
        val = cache.get(key)
        if val is not None and isinstance(cache, OrderedDict):
            cache.move_to_end(key)
        return val

    def _cache_put(self, key, value):
        cache = self._cache
        cache[key] = value
        if isinstance(cache, OrderedDict) and len(cache) > self._capacity:
            cache.popitem(last=False)

    # -- queries -----------------------------------------------------------

    @property
    def eval_count(self) -> int:
        return self._eval_count

    def distance(self, from_id: int, to_id: int) -> float:
        """d(from, to): first argument covered, second the candidate representative."""
        a = self._check_id(from_id)
        b = self._check_id(to_id)
        if self._matrix is not None:
            if not self._seen[a, b]:
                self._seen[a, b] = True
                self._eval_count += 1
            return float(self._matrix[a, b])
        key = (a, b)
        val = self._cache_get(key)
        if val is None:
            val = self._evaluate_pairs([key])[0]
            self._cache_put(key, val)
        return val

    def block(self, from_ids: Sequence[int], to_ids: Sequence[int]) -> np.ndarray:
        """Matrix of d(f, t) for every f in from_ids (rows) and t in to_ids (cols)."""
        froms = [self._check_id(i) for i in from_ids]
        tos = [self._check_id(i) for i in to_ids]
        if self._matrix is not None:
            idx = np.ix_(froms, tos)
            fresh = ~self._seen[idx]
            self._eval_count += int(fresh.sum())
            self._seen[idx] = True
            return self._matrix[idx].astype(float, copy=True)
        out = np.empty((len(froms), len(tos)), dtype=float)
        misses = []
        positions = []
        for i, a in enumerate(froms):
            for j, b in enumerate(tos):
                val = self._cache_get((a, b))
                if val is None:
                    misses.append((a, b))
                    positions.append((i, j))
                else:
                    out[i, j] = val
        if misses:
            values = self._evaluate_pairs(misses)
            for (i, j), key, v in zip(positions, misses, values):
                self._cache_put(key, v)
                out[i, j] = v
        return out

    def row(self, from_id: int, to_ids: Sequence[int]) -> np.ndarray:
        """Distances from one sample to each candidate representative."""
        return self.block([from_id], to_ids)[0]

    def pairwise(self, pairs: Sequence[tuple[int, int]]) -> np.ndarray:
        """Element-wise distances for an explicit list of (from, to) pairs."""
        return np.array([self.distance(a, b) for a, b in pairs], dtype=float)


def nearest_representative(x: int, reps: Sequence[int],
                           oracle: DistanceOracle) -> tuple[int, float]:
    """Representative minimising d(x, rep); ties go to the lowest rep index."""
    reps = sorted(int(r) for r in reps)
    if not reps:
        raise ValueError("representative set is empty")
    dists = oracle.row(x, reps)
    i = int(np.argmin(dists))
    return reps[i], float(dists[i])
