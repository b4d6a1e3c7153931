"""Representative-selection algorithms.

All selectors consume a :class:`~repsel.core.Dataset` plus a
:class:`~repsel.core.DistanceOracle` and return a
:class:`RepresentativeSolution`: an ordered representative set, a total
sample-to-representative assignment, and the assigned distances.

The family:

* ``one_shot_select`` - single ordered scan; a sample more than delta away
  from every current representative becomes one itself.
* ``delta_medoids`` - iterates the same assignment scan with a constrained
  per-cluster medoid update until the representative set stabilises. After
  every assignment pass the intermediate solution is already a legal cover,
  the total assigned distance never increases, and the representative count
  never grows after the first scan.
* ``merge_close_clusters`` - optional refinement collapsing representative
  pairs within delta of each other when one member can cover their union.
* ``greedy_k_centers`` - farthest-first traversal extended to stop once the
  maximal distance drops to delta.
* ``k_medoids`` / ``min_k_for_delta`` - the fixed-k baseline and the outer
  search for the smallest k whose cover satisfies delta.

Determinism: every argmin/argmax tie breaks toward the lowest sample index,
scan order defaults to the canonical ingestion order, and all randomness is
seeded.
"""

from __future__ import annotations

import time
from bisect import insort
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from repsel.core import Dataset, DistanceOracle, NoCoverError
from repsel.seeding import TAG_KCENTERS_START, TAG_KMEDOIDS_INIT, make_rng


@dataclass
class SelectorConfig:
    """Shared knobs for the delta-driven selectors.

    ``scan_order`` must be a permutation of the sample ids; ``None`` means
    canonical order. ``seed`` feeds the randomised components only (k-centers
    start); the scan itself is never implicitly shuffled.
    """

    delta: float = 0.0
    scan_order: Sequence[int] | None = None
    seed: int = 0
    max_iterations: int = 1000
    merge_refine: bool = False

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be non-negative")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")

    def resolved_scan_order(self, n: int) -> list[int]:
        if self.scan_order is None:
            return list(range(n))
        order = [int(i) for i in self.scan_order]
        if sorted(order) != list(range(n)):
            raise ValueError("scan_order must be a permutation of the sample ids")
        return order


@dataclass
class Cluster:
    """A representative and the samples assigned to it this pass."""

    representative: int
    members: list[int]


@dataclass
class IterationSnapshot:
    representative_count: int
    total_assigned_distance: float


@dataclass
class SolutionStats:
    iterations: int = 0
    distance_evaluations: int = 0
    wall_time: float = 0.0
    converged: bool = True
    history: list[IterationSnapshot] = field(default_factory=list)


@dataclass
class RepresentativeSolution:
    """A representative set with its assignment.

    ``representatives`` preserves insertion order (for one-shot selection
    that is the order representatives were discovered in, which doubles as
    the insertion log for the separation property). ``delta`` is ``None``
    for solutions without a coverage guarantee (plain k-medoids).
    """

    delta: float | None
    representatives: list[int]
    assignment: dict[int, int]
    assigned_distance: dict[int, float]
    stats: SolutionStats = field(default_factory=SolutionStats)

    @property
    def max_distance(self) -> float:
        if not self.assigned_distance:
            return 0.0
        return max(self.assigned_distance.values())

    @property
    def average_distance(self) -> float:
        if not self.assigned_distance:
            return 0.0
        return sum(self.assigned_distance[s] for s in sorted(self.assigned_distance)) \
            / len(self.assigned_distance)

    def clusters(self) -> list[Cluster]:
        members: dict[int, list[int]] = {r: [] for r in self.representatives}
        for s in sorted(self.assignment):
            members[self.assignment[s]].append(s)
        return [Cluster(r, members[r]) for r in self.representatives]


def _package(clusters: Iterable[Cluster], oracle: DistanceOracle,
             delta: float | None, stats: SolutionStats) -> RepresentativeSolution:
    representatives = []
    assignment: dict[int, int] = {}
    for cluster in clusters:
        representatives.append(cluster.representative)
        for m in cluster.members:
            assignment[m] = cluster.representative
    assignment = {s: assignment[s] for s in sorted(assignment)}
    assigned = {s: oracle.distance(s, r) for s, r in assignment.items()}
    return RepresentativeSolution(delta, representatives, assignment, assigned, stats)


# ---------------------------------------------------------------------------
# assignment scan (the RepAssign subroutine)
# ---------------------------------------------------------------------------

def rep_assign(dataset: Dataset, oracle: DistanceOracle,
               reps: Sequence[int], config: SelectorConfig) -> list[Cluster]:
    """One assignment pass over the dataset in scan order.

    Carried-over representatives are scanned like any other sample. A sample
    joins its nearest representative's cluster when that distance is within
    delta (ties to the lowest representative index); otherwise it becomes a
    new representative seeding its own cluster. A new representative covers
    itself by membership - no self-distance check is made. Representatives
    whose clusters end the pass empty are dropped.
    """
    delta = config.delta
    order = config.resolved_scan_order(dataset.size)
    representatives = [int(r) for r in reps]
    rep_sorted = sorted(representatives)
    members: dict[int, list[int]] = {r: [] for r in representatives}
    for x in order:
        assigned = False
        if rep_sorted:
            dists = oracle.row(x, rep_sorted)
            i = int(np.argmin(dists))
            if dists[i] <= delta:
                members[rep_sorted[i]].append(x)
                assigned = True
        if not assigned:
            if x in members:
                # A carried-over representative beyond delta of every
                # representative (itself included) keeps seeding its cluster.
                members[x].append(x)
            else:
                representatives.append(x)
                insort(rep_sorted, x)
                members[x] = [x]
    return [Cluster(r, members[r]) for r in representatives if members[r]]


def one_shot_select(dataset: Dataset, oracle: DistanceOracle,
                    config: SelectorConfig) -> RepresentativeSolution:
    """Single-pass selection (the delta-medoids first iteration, packaged)."""
    start = time.perf_counter()
    evals_before = oracle.eval_count
    clusters = rep_assign(dataset, oracle, [], config)
    stats = SolutionStats(iterations=1)
    solution = _package(clusters, oracle, config.delta, stats)
    stats.history.append(IterationSnapshot(
        len(solution.representatives), _total_distance(solution)))
    stats.distance_evaluations = oracle.eval_count - evals_before
    stats.wall_time = time.perf_counter() - start
    return solution


def _total_distance(solution: RepresentativeSolution) -> float:
    return sum(solution.assigned_distance[s] for s in sorted(solution.assigned_distance))


# ---------------------------------------------------------------------------
# medoid updates
# ---------------------------------------------------------------------------

def constrained_medoid(cluster: Cluster, oracle: DistanceOracle, delta: float) -> int:
    """Member minimising the within-cluster distance sum, kept within delta.

    The sum includes the candidate's self term. Only members keeping every
    cluster member within delta are eligible; ties break to the lowest
    index. If no member is feasible (pathological self-distances) the
    current representative is kept.
    """
    members = sorted(cluster.members)
    if not members:
        return cluster.representative
    block = oracle.block(members, members)
    feasible = block.max(axis=0) <= delta
    if not feasible.any():
        return cluster.representative
    sums = block.sum(axis=0)
    best = None
    best_sum = None
    for j, candidate in enumerate(members):
        if not feasible[j]:
            continue
        if best is None or sums[j] < best_sum:
            best = candidate
            best_sum = sums[j]
    return best


def _unconstrained_medoid(members: list[int], oracle: DistanceOracle) -> int:
    members = sorted(members)
    block = oracle.block(members, members)
    sums = block.sum(axis=0)
    return members[int(np.argmin(sums))]


# ---------------------------------------------------------------------------
# delta-medoids
# ---------------------------------------------------------------------------

def delta_medoids(dataset: Dataset, oracle: DistanceOracle,
                  config: SelectorConfig) -> RepresentativeSolution:
    """Iterated assignment + constrained medoid refinement until stable.

    Convergence compares the representative id-sets of consecutive
    iterations as unordered sets. Clusters are rebuilt from scratch every
    iteration; with ``merge_refine`` the pairwise cluster merge runs after
    each medoid update.
    """
    start = time.perf_counter()
    evals_before = oracle.eval_count
    stats = SolutionStats(converged=False)
    previous: set[int] = set()
    reps: list[int] = []
    clusters: list[Cluster] = []
    for iteration in range(1, config.max_iterations + 1):
        stats.iterations = iteration
        clusters = rep_assign(dataset, oracle, reps, config)
        clusters = [Cluster(constrained_medoid(c, oracle, config.delta), c.members)
                    for c in clusters]
        if config.merge_refine:
            clusters = _merge_pass(clusters, oracle, config.delta)
        current = {c.representative for c in clusters}
        stats.history.append(IterationSnapshot(
            len(current), _clusters_total_distance(clusters, oracle)))
        if current == previous:
            stats.converged = True
            break
        previous = current
        reps = [c.representative for c in clusters]
    solution = _package(clusters, oracle, config.delta, stats)
    stats.distance_evaluations = oracle.eval_count - evals_before
    stats.wall_time = time.perf_counter() - start
    return solution


def _clusters_total_distance(clusters: list[Cluster], oracle: DistanceOracle) -> float:
    assignment = {}
    for c in clusters:
        for s in c.members:
            assignment[s] = c.representative
    return sum(oracle.distance(s, assignment[s]) for s in sorted(assignment))


# ---------------------------------------------------------------------------
# merging close clusters
# ---------------------------------------------------------------------------

def _merge_pass(clusters: list[Cluster], oracle: DistanceOracle,
                delta: float) -> list[Cluster]:
    clusters = list(clusters)
    merged = True
    while merged:
        merged = False
        order = sorted(range(len(clusters)),
                       key=lambda i: clusters[i].representative)
        for a in range(len(order)):
            for b in range(a + 1, len(order)):
                ci = clusters[order[a]]
                cj = clusters[order[b]]
                ri, rj = ci.representative, cj.representative
                if oracle.distance(ri, rj) > delta and oracle.distance(rj, ri) > delta:
                    continue
                union = ci.members + cj.members
                candidate = _feasible_union_medoid(union, oracle, delta)
                if candidate is None:
                    continue
                keep = min(order[a], order[b])
                drop = max(order[a], order[b])
                clusters[keep] = Cluster(candidate, union)
                del clusters[drop]
                merged = True
                break
            if merged:
                break
    return clusters


def _feasible_union_medoid(union: list[int], oracle: DistanceOracle,
                           delta: float) -> int | None:
    members = sorted(union)
    block = oracle.block(members, members)
    feasible = block.max(axis=0) <= delta
    if not feasible.any():
        return None
    sums = block.sum(axis=0)
    best = None
    best_sum = None
    for j, candidate in enumerate(members):
        if not feasible[j]:
            continue
        if best is None or sums[j] < best_sum:
            best = candidate
            best_sum = sums[j]
    return best


def merge_close_clusters(solution: RepresentativeSolution, oracle: DistanceOracle,
                         delta: float) -> RepresentativeSolution:
    """Collapse representative pairs within delta when their union is coverable.

    Scans representative pairs in ascending index order, merges the first
    mergeable pair under the feasible union member with the smallest
    distance sum, and restarts until a full scan makes no merge. Coverage
    is preserved and the representative count never increases.
    """
    start = time.perf_counter()
    evals_before = oracle.eval_count
    clusters = _merge_pass(solution.clusters(), oracle, delta)
    stats = SolutionStats(iterations=solution.stats.iterations,
                          converged=solution.stats.converged,
                          history=list(solution.stats.history))
    merged = _package(clusters, oracle, delta, stats)
    stats.distance_evaluations = (solution.stats.distance_evaluations
                                  + oracle.eval_count - evals_before)
    stats.wall_time = solution.stats.wall_time + time.perf_counter() - start
    return merged


# ---------------------------------------------------------------------------
# greedy k-centers (farthest-first traversal)
# ---------------------------------------------------------------------------

def greedy_k_centers(dataset: Dataset, oracle: DistanceOracle,
                     config: SelectorConfig) -> RepresentativeSolution:
    """Extended farthest-first traversal: add the farthest sample until the
    maximal remaining distance is within delta.

    The start representative is seed-chosen uniformly; argmax ties break to
    the lowest sample index. The final assignment maps every sample to its
    nearest representative.
    """
    start_time = time.perf_counter()
    evals_before = oracle.eval_count
    n = dataset.size
    stats = SolutionStats(iterations=1)
    if n == 0:
        return RepresentativeSolution(config.delta, [], {}, {}, stats)
    rng = make_rng(config.seed, TAG_KCENTERS_START)
    start = int(rng.integers(n))
    reps = [start]
    active = np.ones(n, dtype=bool)
    active[start] = False
    best = np.full(n, np.inf)
    ids = np.arange(n)
    if active.any():
        best[active] = oracle.block(ids[active], [start])[:, 0]
    while True:
        if not active.any():
            break
        masked = np.where(active, best, -np.inf)
        far = int(np.argmax(masked))
        if masked[far] <= config.delta:
            break
        reps.append(far)
        active[far] = False
        if active.any():
            column = oracle.block(ids[active], [far])[:, 0]
            best[active] = np.minimum(best[active], column)
    rep_sorted = sorted(reps)
    block = oracle.block(ids, rep_sorted)
    nearest = np.argmin(block, axis=1)
    clusters = {r: [] for r in reps}
    for s in range(n):
        clusters[rep_sorted[int(nearest[s])]].append(s)
    solution = _package([Cluster(r, clusters[r]) for r in reps], oracle,
                        config.delta, stats)
    stats.history.append(IterationSnapshot(
        len(reps), _total_distance(solution)))
    stats.distance_evaluations = oracle.eval_count - evals_before
    stats.wall_time = time.perf_counter() - start_time
    return solution


# ---------------------------------------------------------------------------
# k-medoids baseline and the minimal-k outer search
# ---------------------------------------------------------------------------

def k_medoids(dataset: Dataset, oracle: DistanceOracle, k: int, seed: int = 0,
              max_iterations: int = 1000) -> RepresentativeSolution:
    """Classic alternating k-medoids over the oracle's distances.

    Starts from seed-chosen distinct medoids, alternates nearest-medoid
    assignment (ties to the lowest medoid index) with unconstrained medoid
    recomputation (ties to the lowest index; an empty cluster keeps its
    medoid) until the medoid set stops changing. The returned solution has
    no coverage guarantee, so its ``delta`` is ``None``.
    """
    start_time = time.perf_counter()
    evals_before = oracle.eval_count
    n = dataset.size
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range for dataset of size {n}")
    rng = make_rng(seed, TAG_KMEDOIDS_INIT)
    medoids = sorted(int(m) for m in rng.choice(n, size=k, replace=False))
    ids = np.arange(n)
    stats = SolutionStats(converged=False)
    assignment_cols = None
    block = None
    for iteration in range(1, max_iterations + 1):
        stats.iterations = iteration
        block = oracle.block(ids, medoids)
        assignment_cols = np.argmin(block, axis=1)
        new_medoids = []
        for j, medoid in enumerate(medoids):
            cluster_members = [int(s) for s in ids[assignment_cols == j]]
            if not cluster_members:
                new_medoids.append(medoid)
            else:
                new_medoids.append(_unconstrained_medoid(cluster_members, oracle))
        new_medoids = sorted(set(new_medoids))
        if set(new_medoids) == set(medoids):
            stats.converged = True
            break
        medoids = new_medoids
    if not stats.converged:
        # Iteration cap hit after a medoid update: refresh the assignment so
        # it is consistent with the final medoid set.
        block = oracle.block(ids, medoids)
        assignment_cols = np.argmin(block, axis=1)
    assignment = {int(s): medoids[int(assignment_cols[s])] for s in ids}
    assigned = {int(s): float(block[s, assignment_cols[s]]) for s in ids}
    stats.history.append(IterationSnapshot(
        len(medoids), sum(assigned[s] for s in sorted(assigned))))
    stats.distance_evaluations = oracle.eval_count - evals_before
    stats.wall_time = time.perf_counter() - start_time
    return RepresentativeSolution(None, list(medoids), assignment, assigned, stats)


def min_k_for_delta(dataset: Dataset, oracle: DistanceOracle, delta: float,
                    seed: int = 0, restarts: int = 1,
                    max_iterations: int = 1000) -> tuple[int, RepresentativeSolution]:
    """Smallest k for which a seeded k-medoids run covers within delta.

    Tries k = 1, 2, ... with ``restarts`` seeds each and returns the first
    qualifying run. When every self-distance is within delta the search is
    guaranteed to succeed by k = |S|; otherwise a NoCoverError is raised.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    start_time = time.perf_counter()
    evals_before = oracle.eval_count
    n = dataset.size
    if n == 0:
        return 0, RepresentativeSolution(delta, [], {}, {}, SolutionStats(iterations=1))
    for k in range(1, n + 1):
        for restart in range(restarts):
            solution = k_medoids(dataset, oracle, k,
                                 seed=_restart_seed(seed, k, restart),
                                 max_iterations=max_iterations)
            if solution.max_distance <= delta:
                solution.delta = delta
                solution.stats.distance_evaluations = oracle.eval_count - evals_before
                solution.stats.wall_time = time.perf_counter() - start_time
                return k, solution
    raise NoCoverError(
        f"no k up to {n} satisfies delta={delta} (self-distances may exceed delta)")


def _restart_seed(seed: int, k: int, restart: int) -> int:
    seq = make_rng(seed, TAG_KMEDOIDS_INIT, k, restart)
    return int(seq.integers(0, 2 ** 63 - 1))
