"""Selection algorithms: hand-simulated examples and structural invariants."""

import numpy as np
import pytest

from repsel.core import Dataset, DistanceOracle, NoCoverError
from repsel.selectors import (
    Cluster,
    SelectorConfig,
    constrained_medoid,
    delta_medoids,
    greedy_k_centers,
    k_medoids,
    merge_close_clusters,
    min_k_for_delta,
    one_shot_select,
    rep_assign,
)


def line(values):
    ds = Dataset.points(np.asarray(values, dtype=float))
    return ds, DistanceOracle.euclidean(ds)


def random_instance(seed, n, dims=2):
    rng = np.random.default_rng(seed)
    ds = Dataset.points(rng.normal(size=(n, dims)) * 3.0)
    return ds, DistanceOracle.euclidean(ds)


def random_matrix_instance(seed, n):
    rng = np.random.default_rng(seed)
    matrix = rng.uniform(0.2, 10.0, size=(n, n))
    np.fill_diagonal(matrix, 0.0)
    ds = Dataset.opaque(n)
    return ds, DistanceOracle.from_matrix(matrix)


def assert_legal_cover(solution, oracle, delta, n):
    assert sorted(solution.assignment) == list(range(n))
    reps = set(solution.representatives)
    for s, r in solution.assignment.items():
        assert r in reps
        d = oracle.distance(s, r)
        assert solution.assigned_distance[s] == d
        assert d <= delta


class TestRepAssign:
    def test_hand_simulation(self):
        ds, oracle = line([0.0, 0.5, 2.0, 2.4])
        clusters = rep_assign(ds, oracle, [], SelectorConfig(delta=1.0))
        assert [(c.representative, c.members) for c in clusters] == [
            (0, [0, 1]), (2, [2, 3])]

    def test_empty_dataset(self):
        ds, oracle = line([])
        assert rep_assign(ds, oracle, [], SelectorConfig(delta=1.0)) == []

    def test_carried_representative_covers_everything(self):
        ds, oracle = line([0.0, 1.0, 2.0])
        clusters = rep_assign(ds, oracle, [1], SelectorConfig(delta=1.0))
        assert [(c.representative, c.members) for c in clusters] == [(1, [0, 1, 2])]

    def test_carried_representative_with_empty_cluster_is_dropped(self):
        # Sample 2 duplicates sample 0, so the tie sends it to rep 0 and
        # rep 2's cluster ends the pass empty.
        ds, oracle = line([0.0, 0.1, 0.0])
        clusters = rep_assign(ds, oracle, [0, 2], SelectorConfig(delta=1.0))
        assert [(c.representative, sorted(c.members)) for c in clusters] == [
            (0, [0, 1, 2])]

    def test_invalid_scan_order_rejected(self):
        ds, oracle = line([0.0, 1.0])
        with pytest.raises(ValueError):
            rep_assign(ds, oracle, [], SelectorConfig(delta=1.0, scan_order=[0, 0]))


class TestOneShot:
    def test_hand_simulation(self):
        ds, oracle = line([0.0, 0.5, 2.0, 2.4])
        sol = one_shot_select(ds, oracle, SelectorConfig(delta=1.0))
        assert sol.representatives == [0, 2]
        assert sol.assignment == {0: 0, 1: 0, 2: 2, 3: 2}
        assert sol.stats.iterations == 1

    def test_single_sample(self):
        ds, oracle = line([7.0])
        sol = one_shot_select(ds, oracle, SelectorConfig(delta=1.0))
        assert sol.representatives == [0]

    def test_reversed_scan_order_changes_representatives(self):
        ds, oracle = line([0.0, 0.5, 2.0, 2.4])
        config = SelectorConfig(delta=1.0, scan_order=[3, 2, 1, 0])
        sol = one_shot_select(ds, oracle, config)
        assert sol.representatives == [3, 1]  # values 2.4 and 0.5

    def test_separation_property(self):
        for seed in range(5):
            ds, oracle = random_instance(seed, 60)
            sol = one_shot_select(ds, oracle, SelectorConfig(delta=2.0))
            reps = sol.representatives
            for i in range(len(reps)):
                for j in range(i):
                    # each rep was > delta from every earlier rep at insertion
                    assert oracle.distance(reps[i], reps[j]) > 2.0


class TestConstrainedMedoid:
    def test_exhaustive_example(self):
        ds, oracle = line([0.0, 0.9, 1.0])
        cluster = Cluster(0, [0, 1, 2])
        assert constrained_medoid(cluster, oracle, 1.0) == 1

    def test_singleton(self):
        ds, oracle = line([5.0])
        assert constrained_medoid(Cluster(0, [0]), oracle, 1.0) == 0

    def test_tie_breaks_to_lowest_index(self):
        ds, oracle = line([0.0, 1.0])
        assert constrained_medoid(Cluster(0, [0, 1]), oracle, 1.0) == 0

    def test_infeasible_members_keep_current_representative(self):
        # Self-distances above delta make every candidate infeasible.
        matrix = np.full((2, 2), 5.0)
        ds = Dataset.opaque(2)
        oracle = DistanceOracle.from_matrix(matrix)
        assert constrained_medoid(Cluster(1, [0, 1]), oracle, 1.0) == 1

    def test_constraint_excludes_low_sum_candidate(self):
        # Candidate 1 has the lowest sum but leaves sample 2 beyond delta.
        matrix = np.array([
            [0.0, 0.1, 1.0],
            [0.1, 0.0, 1.0],
            [1.0, 2.0, 0.0],
        ])
        ds = Dataset.opaque(3)
        oracle = DistanceOracle.from_matrix(matrix)
        # sums: to 0 = 1.1, to 1 = 2.1... wait columns: to 0: 0+0.1+1.0=1.1
        best = constrained_medoid(Cluster(0, [0, 1, 2]), oracle, 1.0)
        assert best == 0

    def test_self_term_participates_in_sum(self):
        # Non-zero self-distances shift the argmin.
        matrix = np.array([
            [3.0, 0.2],
            [0.2, 0.0],
        ])
        ds = Dataset.opaque(2)
        oracle = DistanceOracle.from_matrix(matrix)
        # sums: to 0: 3.0 + 0.2 = 3.2; to 1: 0.2 + 0.0 = 0.2 -> 1
        assert constrained_medoid(Cluster(0, [0, 1]), oracle, 4.0) == 1


class TestDeltaMedoids:
    def test_small_line_moves_representative_to_medoid(self):
        ds, oracle = line([0.0, 0.9, 1.0])
        sol = delta_medoids(ds, oracle, SelectorConfig(delta=1.0))
        assert sol.representatives == [1]
        assert sol.stats.iterations == 2
        assert sol.stats.converged

    def test_five_point_line(self):
        ds, oracle = line([0.0, 1.0, 2.0, 3.0, 4.0])
        sol = delta_medoids(ds, oracle, SelectorConfig(delta=1.0))
        assert sorted(sol.representatives) == [0, 2, 4]

    def test_empty_dataset(self):
        ds, oracle = line([])
        sol = delta_medoids(ds, oracle, SelectorConfig(delta=1.0))
        assert sol.representatives == []
        assert sol.stats.iterations == 1
        assert sol.stats.converged

    def test_first_pass_matches_one_shot(self):
        for seed in range(4):
            ds, oracle = random_instance(seed, 50)
            config = SelectorConfig(delta=2.5)
            one_shot = one_shot_select(ds, DistanceOracle.euclidean(ds), config)
            clusters = rep_assign(ds, oracle, [], config)
            assert [c.representative for c in clusters] == one_shot.representatives

    def test_invariants_on_random_instances(self):
        for seed in range(6):
            ds, oracle = random_instance(seed, 80)
            config = SelectorConfig(delta=2.0)
            sol = delta_medoids(ds, oracle, config)
            assert sol.stats.converged
            assert_legal_cover(sol, oracle, 2.0, ds.size)
            history = sol.stats.history
            for earlier, later in zip(history, history[1:]):
                assert later.total_assigned_distance <= earlier.total_assigned_distance
                assert later.representative_count <= earlier.representative_count

    def test_invariants_on_asymmetric_matrices(self):
        for seed in range(6):
            ds, oracle = random_matrix_instance(seed, 40)
            config = SelectorConfig(delta=3.0)
            sol = delta_medoids(ds, oracle, config)
            assert sol.stats.converged
            assert_legal_cover(sol, oracle, 3.0, ds.size)
            history = sol.stats.history
            for earlier, later in zip(history, history[1:]):
                assert later.total_assigned_distance <= earlier.total_assigned_distance
                assert later.representative_count <= earlier.representative_count

    def test_merge_refine_never_worse(self):
        for seed in range(4):
            ds, oracle = random_instance(seed, 60)
            config = SelectorConfig(delta=2.0)
            plain = delta_medoids(ds, oracle, config)
            merged = delta_medoids(ds, DistanceOracle.euclidean(ds),
                                   SelectorConfig(delta=2.0, merge_refine=True))
            assert len(merged.representatives) <= len(plain.representatives)
            assert_legal_cover(merged, oracle, 2.0, ds.size)


class TestMergeCloseClusters:
    def test_merges_two_singletons(self):
        ds, oracle = line([0.0, 2.0])
        sol = one_shot_select(ds, oracle, SelectorConfig(delta=2.0))
        # delta=2 one-shot keeps a single rep already; build the two-cluster
        # shape explicitly through a smaller delta.
        sol = one_shot_select(ds, oracle, SelectorConfig(delta=1.0))
        assert sol.representatives == [0, 1]
        merged = merge_close_clusters(sol, oracle, 2.0)
        assert merged.representatives == [0]
        assert merged.assignment == {0: 0, 1: 0}

    def test_no_candidate_pairs_is_identity(self):
        ds, oracle = line([0.0, 2.0])
        sol = one_shot_select(ds, oracle, SelectorConfig(delta=1.0))
        merged = merge_close_clusters(sol, oracle, 1.0)
        assert merged.representatives == [0, 1]

    def test_single_cluster_is_identity(self):
        ds, oracle = line([0.0, 0.5])
        sol = one_shot_select(ds, oracle, SelectorConfig(delta=1.0))
        assert len(sol.representatives) == 1
        merged = merge_close_clusters(sol, oracle, 1.0)
        assert merged.representatives == sol.representatives

    def test_close_pair_without_union_cover_is_kept(self):
        # Reps within delta of each other but no single member covers both
        # clusters: asymmetric matrix where the cross distances are huge.
        matrix = np.array([
            [0.0, 1.0, 9.0, 9.0],
            [1.0, 0.0, 9.0, 9.0],
            [0.5, 9.0, 0.0, 9.0],
            [9.0, 0.5, 9.0, 0.0],
        ])
        ds = Dataset.opaque(4)
        oracle = DistanceOracle.from_matrix(matrix)
        clusters = [Cluster(0, [0, 2]), Cluster(1, [1, 3])]
        from repsel.selectors import _merge_pass

        merged = _merge_pass(clusters, oracle, 1.0)
        assert len(merged) == 2

    def test_merge_preserves_cover_on_random_instances(self):
        for seed in range(5):
            ds, oracle = random_instance(seed, 60)
            sol = delta_medoids(ds, oracle, SelectorConfig(delta=2.0))
            merged = merge_close_clusters(sol, oracle, 2.0)
            assert len(merged.representatives) <= len(sol.representatives)
            assert_legal_cover(merged, oracle, 2.0, ds.size)


class TestGreedyKCenters:
    def test_farthest_first_from_zero(self):
        ds, oracle = line([0.0, 10.0, 20.0])
        sol = greedy_k_centers(ds, oracle, SelectorConfig(delta=6.0, seed=2))
        assert sol.representatives == [0, 2, 1]
        assert_legal_cover(sol, oracle, 6.0, ds.size)

    def test_generous_delta_keeps_only_start(self):
        ds, oracle = line([0.0, 10.0, 20.0])
        sol = greedy_k_centers(ds, oracle, SelectorConfig(delta=25.0, seed=2))
        assert sol.representatives == [0]
        assert_legal_cover(sol, oracle, 25.0, ds.size)

    def test_single_sample(self):
        ds, oracle = line([3.0])
        sol = greedy_k_centers(ds, oracle, SelectorConfig(delta=1.0, seed=0))
        assert sol.representatives == [0]

    def test_empty_dataset(self):
        ds, oracle = line([])
        sol = greedy_k_centers(ds, oracle, SelectorConfig(delta=1.0))
        assert sol.representatives == []

    def test_legal_cover_on_random_instances(self):
        for seed in range(5):
            ds, oracle = random_instance(seed, 70)
            sol = greedy_k_centers(ds, oracle, SelectorConfig(delta=2.0, seed=seed))
            assert_legal_cover(sol, oracle, 2.0, ds.size)


class TestKMedoids:
    def test_three_point_line_single_medoid(self):
        ds, oracle = line([0.0, 1.0, 2.0])
        sol = k_medoids(ds, oracle, k=1, seed=0)
        assert sol.representatives == [1]
        assert sol.delta is None

    def test_k_equals_n(self):
        ds, oracle = line([0.0, 1.0, 2.0])
        sol = k_medoids(ds, oracle, k=3, seed=0)
        assert sol.representatives == [0, 1, 2]
        assert sol.average_distance == 0.0

    def test_two_blobs_converge_to_tie_broken_medoids(self):
        ds, oracle = line([0.0, 1.0, 10.0, 11.0])
        for seed in range(4):
            sol = k_medoids(ds, oracle, k=2, seed=seed)
            assert sol.representatives == [0, 2]
            assert sol.assignment == {0: 0, 1: 0, 2: 2, 3: 2}

    def test_k_out_of_range(self):
        ds, oracle = line([0.0, 1.0])
        with pytest.raises(ValueError):
            k_medoids(ds, oracle, k=0)
        with pytest.raises(ValueError):
            k_medoids(ds, oracle, k=3)


class TestMinKForDelta:
    def test_three_point_line(self):
        ds, oracle = line([0.0, 1.0, 2.0])
        k, sol = min_k_for_delta(ds, oracle, delta=1.0, seed=0, restarts=2)
        assert k == 1
        assert sol.representatives == [1]
        assert sol.delta == 1.0

    def test_five_point_line_needs_two(self):
        ds, oracle = line([0.0, 1.0, 2.0, 3.0, 4.0])
        k, sol = min_k_for_delta(ds, oracle, delta=1.0, seed=0, restarts=4)
        assert k == 2
        assert sol.max_distance <= 1.0
        assert_legal_cover(sol, oracle, 1.0, ds.size)

    def test_huge_delta_gives_one(self):
        ds, oracle = random_instance(3, 30)
        k, sol = min_k_for_delta(ds, oracle, delta=1e9, seed=0, restarts=1)
        assert k == 1

    def test_no_cover_when_self_distances_exceed_delta(self):
        matrix = np.full((3, 3), 9.0)
        ds = Dataset.opaque(3)
        oracle = DistanceOracle.from_matrix(matrix)
        with pytest.raises(NoCoverError):
            min_k_for_delta(ds, oracle, delta=1.0, seed=0, restarts=1)

    def test_restarts_must_be_positive(self):
        ds, oracle = line([0.0])
        with pytest.raises(ValueError):
            min_k_for_delta(ds, oracle, delta=1.0, seed=0, restarts=0)


class TestDeterminism:
    def test_identical_runs_identical_outputs(self):
        ds, oracle = random_instance(9, 80)
        config = SelectorConfig(delta=2.0, seed=5)
        first = delta_medoids(ds, DistanceOracle.euclidean(ds), config)
        second = delta_medoids(ds, DistanceOracle.euclidean(ds), config)
        assert first.representatives == second.representatives
        assert first.assignment == second.assignment
        assert first.assigned_distance == second.assigned_distance

    def test_cache_state_does_not_change_results(self):
        ds, _ = random_instance(10, 50)
        warm = DistanceOracle.euclidean(ds)
        warm.block(range(50), range(50))  # pre-warm every pair
        cold = DistanceOracle.euclidean(ds)
        config = SelectorConfig(delta=2.0)
        sol_warm = delta_medoids(ds, warm, config)
        sol_cold = delta_medoids(ds, cold, config)
        assert sol_warm.representatives == sol_cold.representatives
        assert sol_warm.assigned_distance == sol_cold.assigned_distance
