"""Coverage reporting, stability experiments, synthetic data, and benchmarks.

The evaluator never trusts a solution's stored distances: every report
recomputes the assigned distances straight from the oracle. The benchmark
harness mirrors the experimental protocol of the selection algorithms'
comparison study at desk scale: seeded subset draws, per-cell repetition,
and mean/standard-error summaries.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from repsel.core import Dataset, DistanceOracle
from repsel.seeding import (
    TAG_BENCH_ALGO,
    TAG_BENCH_SUBSET,
    TAG_GAUSSIAN_GEN,
    TAG_MIN_K_SEARCH,
    TAG_STABILITY,
    make_rng,
    shuffled_scan_order,
)
from repsel.selectors import (
    RepresentativeSolution,
    SelectorConfig,
    delta_medoids,
    greedy_k_centers,
    k_medoids,
    min_k_for_delta,
    one_shot_select,
)

COVER_ALGORITHMS = ("delta-medoids", "one-shot", "k-centers", "kmedoids-min-k")


@dataclass
class CoverageReport:
    delta: float
    representative_count: int
    max_distance: float
    average_distance: float
    violations: list[tuple[int, float]]

    @property
    def legal(self) -> bool:
        return not self.violations


def coverage_report(solution: RepresentativeSolution, oracle: DistanceOracle,
                    delta: float | None = None) -> CoverageReport:
    """Recompute every assigned distance from the oracle and aggregate."""
    if delta is None:
        delta = solution.delta
    if delta is None:
        raise ValueError("no delta on the solution and none supplied")
    samples = sorted(solution.assignment)
    distances = [oracle.distance(s, solution.assignment[s]) for s in samples]
    violations = [(s, d) for s, d in zip(samples, distances) if d > delta]
    max_d = max(distances) if distances else 0.0
    avg_d = sum(distances) / len(distances) if distances else 0.0
    return CoverageReport(
        delta=delta,
        representative_count=len(solution.representatives),
        max_distance=max_d,
        average_distance=avg_d,
        violations=violations,
    )


def overlap(c1, c2) -> float:
    """Jaccard overlap of two representative id-sets; two empty sets overlap fully."""
    s1, s2 = set(c1), set(c2)
    if not s1 and not s2:
        return 1.0
    return len(s1 & s2) / len(s1 | s2)


# ---------------------------------------------------------------------------
# stability
# ---------------------------------------------------------------------------

@dataclass
class StabilityReport:
    algorithm: str
    delta: float
    shuffles: int
    seed: int
    mean_overlap: float
    pair_overlaps: list[tuple[int, int, float]]
    histogram: list[int]
    bin_width: float
    representative_sets: list[list[int]] = field(default_factory=list)


def _stability_run(dataset, oracle, algorithm, delta, seed, repetition, fixed_k):
    """One stability repetition, randomised the way each method prescribes."""
    if algorithm == "delta-medoids":
        order = shuffled_scan_order(dataset.size, seed, TAG_STABILITY, repetition)
        return delta_medoids(dataset, oracle,
                             SelectorConfig(delta=delta, scan_order=order))
    if algorithm == "one-shot":
        order = shuffled_scan_order(dataset.size, seed, TAG_STABILITY, repetition)
        return one_shot_select(dataset, oracle,
                               SelectorConfig(delta=delta, scan_order=order))
    if algorithm == "k-centers":
        start_seed = int(make_rng(seed, TAG_STABILITY, repetition).integers(2 ** 63 - 1))
        return greedy_k_centers(dataset, oracle,
                                SelectorConfig(delta=delta, seed=start_seed))
    if algorithm == "kmedoids":
        init_seed = int(make_rng(seed, TAG_STABILITY, repetition).integers(2 ** 63 - 1))
        return k_medoids(dataset, oracle, fixed_k, seed=init_seed)
    raise ValueError(f"unknown stability algorithm {algorithm!r}")


def stability_experiment(dataset: Dataset, oracle: DistanceOracle, algorithm: str,
                         delta: float, shuffles: int, seed: int,
                         bin_width: float = 0.05,
                         restarts: int = 3) -> StabilityReport:
    """Mean pairwise overlap of representative sets across randomised reruns.

    Scan-order shuffles drive delta-medoids and one-shot; k-centers redraws
    its starting sample; k-medoids redraws its medoid initialisation at the
    smallest covering k (found once per dataset). Deterministic given seed.
    """
    if shuffles < 2:
        raise ValueError("stability needs at least two runs")
    fixed_k = None
    if algorithm == "kmedoids":
        fixed_k, _ = min_k_for_delta(dataset, oracle, delta,
                                     seed=int(make_rng(seed, TAG_MIN_K_SEARCH)
                                              .integers(2 ** 63 - 1)),
                                     restarts=restarts)
    rep_sets = []
    for repetition in range(shuffles):
        solution = _stability_run(dataset, oracle, algorithm, delta, seed,
                                  repetition, fixed_k)
        rep_sets.append(sorted(solution.representatives))
    pair_overlaps = []
    for i in range(shuffles):
        for j in range(i + 1, shuffles):
            pair_overlaps.append((i, j, overlap(rep_sets[i], rep_sets[j])))
    values = [v for _, _, v in pair_overlaps]
    mean = sum(values) / len(values)
    bins = int(round(1.0 / bin_width))
    histogram = [0] * bins
    for v in values:
        idx = min(int(v / bin_width), bins - 1)
        histogram[idx] += 1
    return StabilityReport(
        algorithm=algorithm, delta=delta, shuffles=shuffles, seed=seed,
        mean_overlap=mean, pair_overlaps=pair_overlaps,
        histogram=histogram, bin_width=bin_width,
        representative_sets=rep_sets,
    )


# ---------------------------------------------------------------------------
# synthetic data
# ---------------------------------------------------------------------------

def gen_multimodal_gaussian(seed: int, dims: int, modes: int,
                            samples_per_mode: int,
                            mean_range: tuple[float, float] = (-10.0, 10.0),
                            var_range: tuple[float, float] = (0.5, 2.0)) -> Dataset:
    """Seeded multimodal Gaussian point cloud.

    Mode means are uniform in ``mean_range`` per coordinate, diagonal
    variances uniform in ``var_range``; samples are concatenated mode by
    mode, so the dataset holds ``modes * samples_per_mode`` points.
    """
    if dims < 1 or modes < 1 or samples_per_mode < 1:
        raise ValueError("dims, modes, and samples_per_mode must be positive")
    rng = make_rng(seed, TAG_GAUSSIAN_GEN)
    means = rng.uniform(mean_range[0], mean_range[1], size=(modes, dims))
    variances = rng.uniform(var_range[0], var_range[1], size=(modes, dims))
    chunks = [rng.normal(means[m], np.sqrt(variances[m]), size=(samples_per_mode, dims))
              for m in range(modes)]
    return Dataset.points(np.concatenate(chunks, axis=0))


# ---------------------------------------------------------------------------
# benchmark harness
# ---------------------------------------------------------------------------

@dataclass
class BenchmarkRow:
    dataset: str
    algorithm: str
    delta: float
    repetition: int
    seed: int
    subset_size: int
    rep_count: int
    rep_pct: float
    avg_dist: float
    max_dist: float
    dist_evals: int
    wall_ms: float
    legal: bool = True


@dataclass
class BenchmarkSummary:
    dataset: str
    algorithm: str
    delta: float
    statistic: str  # "mean" or "stderr"
    subset_size: float
    rep_count: float
    rep_pct: float
    avg_dist: float
    max_dist: float
    dist_evals: float
    wall_ms: float


def run_algorithm(name: str, dataset: Dataset, oracle: DistanceOracle,
                  delta: float, seed: int, restarts: int = 1,
                  scan_order=None, merge_refine: bool = False) -> RepresentativeSolution:
    """Dispatch one covering algorithm by its benchmark name."""
    config = SelectorConfig(delta=delta, seed=seed, scan_order=scan_order,
                            merge_refine=merge_refine)
    if name == "delta-medoids":
        return delta_medoids(dataset, oracle, config)
    if name == "one-shot":
        return one_shot_select(dataset, oracle, config)
    if name == "k-centers":
        return greedy_k_centers(dataset, oracle, config)
    if name == "kmedoids-min-k":
        return min_k_for_delta(dataset, oracle, delta, seed=seed,
                               restarts=restarts)[1]
    raise ValueError(f"unknown algorithm {name!r}")


def _benchmark_cell(name, dataset, oracle_factory, algorithm, delta,
                    repetition, seed, subset_size, restarts):
    n = dataset.size
    draw_seed = int(make_rng(seed, TAG_BENCH_SUBSET, repetition).integers(2 ** 63 - 1))
    if subset_size and subset_size < n:
        rng = np.random.default_rng(draw_seed)
        ids = sorted(int(i) for i in rng.choice(n, size=subset_size, replace=False))
        sub = dataset.subset(ids)
    else:
        sub = dataset
    oracle = oracle_factory(sub)
    algo_seed = int(make_rng(seed, TAG_BENCH_ALGO, repetition).integers(2 ** 63 - 1))
    start = time.perf_counter()
    solution = run_algorithm(algorithm, sub, oracle, delta, algo_seed,
                             restarts=restarts)
    wall_ms = (time.perf_counter() - start) * 1000.0
    report = coverage_report(solution, oracle, delta)
    return BenchmarkRow(
        dataset=name,
        algorithm=algorithm,
        delta=delta,
        repetition=repetition,
        seed=algo_seed,
        subset_size=sub.size,
        rep_count=report.representative_count,
        rep_pct=100.0 * report.representative_count / sub.size if sub.size else 0.0,
        avg_dist=report.average_distance,
        max_dist=report.max_distance,
        dist_evals=solution.stats.distance_evaluations,
        wall_ms=wall_ms,
        legal=report.legal,
    )


def benchmark_run(datasets: Sequence[tuple[str, Dataset]],
                  oracle_factory: Callable[[Dataset], DistanceOracle],
                  algorithms: Sequence[str], deltas: Sequence[float],
                  repetitions: int, subset_size: int | None, seed: int,
                  restarts: int = 1, workers: int | None = None,
                  ) -> tuple[list[BenchmarkRow], list[BenchmarkSummary]]:
    """Full factorial benchmark with per-cell seeded subset draws.

    Subset draws depend only on (seed, repetition), so algorithms and deltas
    are compared on identical subsets within a repetition. Rows come back in
    (dataset, algorithm, delta, repetition) order regardless of worker count.
    An algorithm failing to produce a legal cover flags its row (``legal``)
    and the run continues.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    cells = [(name, ds, algorithm, delta, repetition)
             for name, ds in datasets
             for algorithm in algorithms
             for delta in deltas
             for repetition in range(repetitions)]

    def compute(cell):
        name, ds, algorithm, delta, repetition = cell
        return _benchmark_cell(name, ds, oracle_factory, algorithm, delta,
                               repetition, seed, subset_size, restarts)

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(compute, cells))
    else:
        rows = [compute(cell) for cell in cells]

    summaries = []
    index = 0
    for name, _ in datasets:
        for algorithm in algorithms:
            for delta in deltas:
                group = rows[index:index + repetitions]
                index += repetitions
                summaries.extend(_summarise(group))
    return rows, summaries


def _summarise(group: list[BenchmarkRow]) -> list[BenchmarkSummary]:
    columns = ("subset_size", "rep_count", "rep_pct", "avg_dist",
               "max_dist", "dist_evals", "wall_ms")
    data = {c: np.array([getattr(row, c) for row in group], dtype=float)
            for c in columns}
    head = group[0]
    mean = {c: float(v.mean()) for c, v in data.items()}
    if len(group) > 1:
        stderr = {c: float(v.std(ddof=1) / np.sqrt(len(group)))
                  for c, v in data.items()}
    else:
        stderr = {c: 0.0 for c in columns}
    return [
        BenchmarkSummary(head.dataset, head.algorithm, head.delta, "mean", **mean),
        BenchmarkSummary(head.dataset, head.algorithm, head.delta, "stderr", **stderr),
    ]
