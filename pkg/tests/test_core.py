"""Tests for the dataset/oracle layer."""

import numpy as np
import pytest

from repsel.core import (
    Dataset,
    DistanceContractError,
    DistanceOracle,
    nearest_representative,
)


def line_dataset(values):
    return Dataset.points(np.asarray(values, dtype=float))


class TestDistanceOracle:
    def test_matrix_lookup_preserves_asymmetry(self):
        oracle = DistanceOracle.from_matrix([[0.0, 2.0], [3.0, 0.0]])
        assert oracle.distance(0, 1) == 2.0
        assert oracle.distance(1, 0) == 3.0

    def test_zero_diagonal_identity(self):
        oracle = DistanceOracle.from_matrix([[0.0, 1.0], [1.0, 0.0]])
        assert oracle.distance(0, 0) == 0.0
        assert oracle.distance(1, 1) == 0.0

    def test_cache_counts_underlying_evaluations_once(self):
        oracle = DistanceOracle.from_matrix([[0.0, 2.0], [3.0, 0.0]])
        first = oracle.distance(0, 1)
        assert oracle.eval_count == 1
        second = oracle.distance(0, 1)
        assert second == first
        assert oracle.eval_count == 1

    def test_function_cache_counts_once(self):
        calls = []

        def dist(a, b):
            calls.append((a, b))
            return abs(a - b)

        ds = Dataset("points", [0.0, 5.0], 2)
        oracle = DistanceOracle(2, func=dist, items=[0.0, 5.0])
        assert oracle.distance(0, 1) == 5.0
        assert oracle.distance(0, 1) == 5.0
        assert oracle.eval_count == 1
        assert calls == [(0.0, 5.0)]
        del ds

    def test_invalid_id_raises_index_error(self):
        oracle = DistanceOracle.from_matrix([[0.0, 1.0], [1.0, 0.0]])
        with pytest.raises(IndexError):
            oracle.distance(0, 2)
        with pytest.raises(IndexError):
            oracle.distance(-1, 0)

    def test_negative_distance_rejected(self):
        oracle = DistanceOracle(2, func=lambda a, b: -1.0, items=[0, 1])
        with pytest.raises(DistanceContractError):
            oracle.distance(0, 1)

    def test_negative_matrix_rejected(self):
        with pytest.raises(DistanceContractError):
            DistanceOracle.from_matrix([[0.0, -1.0], [1.0, 0.0]])

    def test_non_square_matrix_rejected(self):
        with pytest.raises(ValueError):
            DistanceOracle.from_matrix([[0.0, 1.0, 2.0], [1.0, 0.0, 2.0]])

    def test_cache_transparency_thousand_queries(self):
        # Cached and uncached oracles must agree bit for bit.
        rng = np.random.default_rng(7)
        ds = Dataset.points(rng.normal(size=(40, 3)))
        cached = DistanceOracle.euclidean(ds)
        queries = [(int(rng.integers(40)), int(rng.integers(40))) for _ in range(1000)]
        first_pass = [cached.distance(a, b) for a, b in queries]
        second_pass = [cached.distance(a, b) for a, b in queries]
        fresh = DistanceOracle.euclidean(ds)
        fresh_vals = [fresh.distance(a, b) for a, b in queries]
        assert first_pass == second_pass == fresh_vals
        assert cached.eval_count == len({q for q in queries})

    def test_block_matches_scalar_queries(self):
        rng = np.random.default_rng(3)
        ds = Dataset.points(rng.normal(size=(12, 4)))
        oracle = DistanceOracle.euclidean(ds)
        block = oracle.block(range(12), [2, 5, 7])
        other = DistanceOracle.euclidean(ds)
        for i in range(12):
            for j, t in enumerate([2, 5, 7]):
                assert block[i, j] == other.distance(i, t)

    def test_lru_capacity_evicts_and_reevaluates(self):
        counter = {"n": 0}

        def dist(a, b):
            counter["n"] += 1
            return abs(a - b)

        oracle = DistanceOracle(4, func=dist, items=[0.0, 1.0, 2.0, 3.0],
                                cache_capacity=2)
        oracle.distance(0, 1)
        oracle.distance(0, 2)
        oracle.distance(0, 3)  # evicts (0, 1)
        assert oracle.eval_count == 3
        oracle.distance(0, 1)  # re-evaluated after eviction
        assert oracle.eval_count == 4
        assert counter["n"] == 4

    def test_matrix_block_counts_fresh_entries_only(self):
        oracle = DistanceOracle.from_matrix(np.zeros((4, 4)))
        oracle.block([0, 1], [0, 1])
        assert oracle.eval_count == 4
        oracle.block([0, 1, 2], [0, 1])
        assert oracle.eval_count == 6


class TestNearestRepresentative:
    def test_direct_minimum(self):
        ds = line_dataset([0.0, 1.0, 2.0, 3.0])
        oracle = DistanceOracle.euclidean(ds)
        rep, dist = nearest_representative(2, [0, 3], oracle)
        assert rep == 3
        assert dist == 1.0

    def test_self_is_nearest_with_zero_self_distance(self):
        ds = line_dataset([0.0, 5.0, 9.0])
        oracle = DistanceOracle.euclidean(ds)
        rep, dist = nearest_representative(1, [0, 1, 2], oracle)
        assert rep == 1
        assert dist == 0.0

    def test_tie_breaks_to_lowest_index(self):
        ds = line_dataset([0.0, 1.0, 2.0])
        oracle = DistanceOracle.euclidean(ds)
        rep, dist = nearest_representative(1, [0, 2], oracle)
        assert rep == 0
        assert dist == 1.0

    def test_empty_reps_raise(self):
        ds = line_dataset([0.0])
        oracle = DistanceOracle.euclidean(ds)
        with pytest.raises(ValueError):
            nearest_representative(0, [], oracle)


class TestDataset:
    def test_points_promotes_1d(self):
        ds = Dataset.points([1.0, 2.0, 3.0])
        assert ds.items.shape == (3, 1)
        assert ds.size == 3

    def test_subset_reindexes(self):
        ds = Dataset.points([[0.0], [1.0], [2.0], [3.0]])
        sub = ds.subset([3, 1])
        assert sub.size == 2
        assert sub.items[0, 0] == 3.0
        assert sub.items[1, 0] == 1.0

    def test_subset_validates_ids(self):
        ds = Dataset.points([[0.0], [1.0]])
        with pytest.raises(IndexError):
            ds.subset([0, 2])

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            Dataset("blobs", None, 0)
