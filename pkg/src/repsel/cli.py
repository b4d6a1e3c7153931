"""Command-line interface.

Subcommands::

    repsel select    input --distance ... --algorithm ... --delta ... --out sol.json
    repsel eval      input solution.json --distance ...
    repsel stability input --distance ... --algorithm ... --delta ... --shuffles N
    repsel bench     config.ini
    repsel gen       --kind gaussian|line|grid ... --out points.csv
    repsel dist      input --distance ... --from I --to J

Exit codes: 0 success; 1 coverage violations (eval); 2 parse/parameter
errors (parse failures report the offending line); 3 distance-contract
violations; 4 no cover exists.

Outputs are byte-deterministic: repeating a command with the same arguments
reproduces each output file exactly. Wall-clock timings are therefore left
out of output files unless ``--timings`` (or ``timings = true`` in a bench
config) asks for them; the manifest embedded in (or written alongside)
every output records the full command for reruns. ``REPSEL_THREADS`` caps
the benchmark worker count (0 = auto, unset = sequential).
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys

import numpy as np

from repsel import __version__
from repsel.core import (
    Dataset,
    DistanceContractError,
    DistanceOracle,
    NoCoverError,
)
from repsel.distances import (
    DEFAULT_MUSIC_CONFIG,
    DEFAULT_TRAJECTORY_CONFIG,
    load_distance_configs,
    music_distance,
    trajectory_distance,
)
from repsel.evaluation import (
    BenchmarkRow,
    benchmark_run,
    coverage_report,
    gen_multimodal_gaussian,
    run_algorithm,
    stability_experiment,
)
from repsel.io import (
    ParseError,
    build_manifest,
    dumps_csv,
    dumps_json,
    fmt_float,
    load_matrix_csv,
    load_points_csv,
    load_sequences_jsonl,
    load_trajectories_jsonl,
    read_solution,
    solution_document,
    write_manifest_sidecar,
    write_text,
)
from repsel.seeding import shuffled_scan_order
from repsel.selectors import (
    RepresentativeSolution,
    SelectorConfig,
    SolutionStats,
    delta_medoids,
    k_medoids,
)

DISTANCES = ("euclidean", "precomputed", "music", "trajectory")
SELECT_ALGORITHMS = ("delta-medoids", "one-shot", "k-centers",
                     "kmedoids", "kmedoids-min-k")
STABILITY_ALGORITHMS = ("delta-medoids", "one-shot", "k-centers", "kmedoids")

BENCH_COLUMNS = ["dataset", "algorithm", "delta", "repetition", "seed",
                 "subset_size", "rep_count", "rep_pct", "avg_dist",
                 "max_dist", "dist_evals", "wall_ms"]


def _distance_params(distance, music_cfg, traj_cfg) -> dict:
    if distance == "music":
        return {"gap": music_cfg.gap,
                "reward_offset": music_cfg.reward_offset,
                "bag_weight": music_cfg.bag_weight,
                "local_weight": music_cfg.local_weight}
    if distance == "trajectory":
        return {"gap": traj_cfg.gap,
                "reward_offset": traj_cfg.reward_offset,
                "bag_weight": traj_cfg.bag_weight,
                "local_weight": traj_cfg.local_weight,
                "angle_weight": traj_cfg.angle_weight,
                "resolution": traj_cfg.resolution}
    return {}


def load_dataset_and_oracle(input_path, distance, distance_config=None):
    if distance_config:
        music_cfg, traj_cfg = load_distance_configs(distance_config)
    else:
        music_cfg, traj_cfg = DEFAULT_MUSIC_CONFIG, DEFAULT_TRAJECTORY_CONFIG
    if distance == "euclidean":
        dataset = load_points_csv(input_path)
        oracle = DistanceOracle.euclidean(dataset)
    elif distance == "precomputed":
        dataset, matrix = load_matrix_csv(input_path)
        oracle = DistanceOracle.from_matrix(matrix)
    elif distance == "music":
        dataset = load_sequences_jsonl(input_path)
        oracle = DistanceOracle.from_function(
            lambda a, b: music_distance(a, b, music_cfg), dataset)
    elif distance == "trajectory":
        dataset = load_trajectories_jsonl(input_path)
        oracle = DistanceOracle.from_function(
            lambda a, b: trajectory_distance(a, b, traj_cfg), dataset)
    else:
        raise ValueError(f"unknown distance kind {distance!r}")
    return dataset, oracle, _distance_params(distance, music_cfg, traj_cfg)


def _oracle_factory(distance, distance_config=None):
    if distance_config:
        music_cfg, traj_cfg = load_distance_configs(distance_config)
    else:
        music_cfg, traj_cfg = DEFAULT_MUSIC_CONFIG, DEFAULT_TRAJECTORY_CONFIG

    def factory(dataset: Dataset) -> DistanceOracle:
        if distance == "euclidean":
            return DistanceOracle.euclidean(dataset)
        if distance == "music":
            return DistanceOracle.from_function(
                lambda a, b: music_distance(a, b, music_cfg), dataset)
        if distance == "trajectory":
            return DistanceOracle.from_function(
                lambda a, b: trajectory_distance(a, b, traj_cfg), dataset)
        raise ValueError(f"distance kind {distance!r} not usable here")

    return factory


# ---------------------------------------------------------------------------
# select
# ---------------------------------------------------------------------------

def cmd_select(args) -> int:
    needs_delta = args.algorithm in ("delta-medoids", "one-shot", "k-centers",
                                     "kmedoids-min-k")
    if needs_delta and args.delta is None:
        raise ValueError(f"--delta is required for {args.algorithm}")
    if args.algorithm == "kmedoids" and args.k is None:
        raise ValueError("--k is required for kmedoids")
    if args.merge_refine and args.algorithm != "delta-medoids":
        raise ValueError("--merge-refine applies to delta-medoids only")
    dataset, oracle, distance_params = load_dataset_and_oracle(
        args.input, args.distance, args.distance_config)
    scan_order = (shuffled_scan_order(dataset.size, args.seed)
                  if args.shuffle else None)
    if args.algorithm == "kmedoids":
        solution = k_medoids(dataset, oracle, args.k, seed=args.seed)
    else:
        if args.algorithm == "delta-medoids" and args.merge_refine:
            config = SelectorConfig(delta=args.delta, seed=args.seed,
                                    scan_order=scan_order, merge_refine=True)
            solution = delta_medoids(dataset, oracle, config)
        else:
            solution = run_algorithm(args.algorithm, dataset, oracle, args.delta,
                                     args.seed, restarts=args.restarts,
                                     scan_order=scan_order)
    manifest = build_manifest("select", {
        "argv": args.raw_argv,
        "algorithm": args.algorithm,
        "delta": args.delta,
        "k": args.k,
        "seed": args.seed,
        "shuffle": args.shuffle,
        "merge_refine": args.merge_refine,
        "restarts": args.restarts,
        "distance": args.distance,
        "distance_params": distance_params,
    }, args.input, args.out)
    document = solution_document(solution, args.algorithm, manifest,
                                 timings=args.timings)
    write_text(args.out, dumps_json(document))
    return 0


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def cmd_eval(args) -> int:
    dataset, oracle, _ = load_dataset_and_oracle(
        args.input, args.distance, args.distance_config)
    document = read_solution(args.solution)
    try:
        representatives = [int(r) for r in document["representatives"]]
        assignment = {int(s): int(r) for s, r in document["assignment"].items()}
    except (TypeError, ValueError) as exc:
        raise ParseError(args.solution, 1, f"bad solution ids: {exc}") from None
    ids = set(assignment) | set(assignment.values()) | set(representatives)
    if any(not 0 <= i < dataset.size for i in ids):
        raise ValueError(
            f"solution ids do not fit the input dataset of size {dataset.size}")
    if sorted(assignment) != list(range(dataset.size)):
        raise ValueError("solution assignment does not cover every input sample")
    delta = args.delta if args.delta is not None else document.get("delta")
    if delta is None:
        raise ValueError("no delta in the solution file; pass --delta")
    solution = RepresentativeSolution(
        delta=float(delta), representatives=representatives,
        assignment=assignment,
        assigned_distance={s: 0.0 for s in assignment},
        stats=SolutionStats())
    report = coverage_report(solution, oracle, float(delta))
    sys.stdout.write(dumps_json({
        "delta": report.delta,
        "representative_count": report.representative_count,
        "max_distance": report.max_distance,
        "average_distance": report.average_distance,
        "violations": [[s, d] for s, d in report.violations],
    }))
    return 0 if report.legal else 1


# ---------------------------------------------------------------------------
# stability
# ---------------------------------------------------------------------------

def cmd_stability(args) -> int:
    dataset, oracle, distance_params = load_dataset_and_oracle(
        args.input, args.distance, args.distance_config)
    report = stability_experiment(dataset, oracle, args.algorithm, args.delta,
                                  args.shuffles, args.seed,
                                  bin_width=args.bin_width,
                                  restarts=args.restarts)
    rows = [["pair", i, j, value] for i, j, value in report.pair_overlaps]
    rows.append(["summary", "", "", report.mean_overlap])
    csv_text = dumps_csv(["row_type", "run_i", "run_j", "overlap"], rows)
    if args.out:
        manifest = build_manifest("stability", {
            "argv": args.raw_argv,
            "algorithm": args.algorithm,
            "delta": args.delta,
            "shuffles": args.shuffles,
            "seed": args.seed,
            "bin_width": args.bin_width,
            "restarts": args.restarts,
            "distance": args.distance,
            "distance_params": distance_params,
        }, args.input, args.out)
        write_text(args.out, csv_text)
        write_manifest_sidecar(args.out, manifest)
    else:
        sys.stdout.write(csv_text)
    return 0


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def _workers_from_env() -> int | None:
    raw = os.environ.get("REPSEL_THREADS")
    if raw is None:
        return None
    count = int(raw)
    if count < 0:
        raise ValueError("REPSEL_THREADS must be >= 0")
    if count == 0:
        return os.cpu_count() or 1
    return count


def _parse_bench_config(path) -> dict:
    parser = configparser.ConfigParser()
    parser.optionxform = str
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", 1) or 1
        raise ParseError(path, lineno, str(exc).splitlines()[0]) from None
    if not parser.has_section("bench"):
        raise ParseError(path, 1, "missing [bench] section")
    section = parser["bench"]

    def split_list(raw):
        return [item.strip() for item in raw.split(",") if item.strip()]

    try:
        config = {
            "datasets": split_list(section.get("datasets", "")),
            "distance": section.get("distance", "euclidean"),
            "algorithms": split_list(section.get("algorithms", "")),
            "deltas": [float(d) for d in split_list(section.get("deltas", ""))],
            "repetitions": section.getint("repetitions", 1),
            "subset_size": (section.getint("subset_size")
                            if section.get("subset_size") else None),
            "seed": section.getint("seed", 0),
            "restarts": section.getint("restarts", 1),
            "out": section.get("out", "bench_results.csv"),
            "svg": section.get("svg") or None,
            "distance_config": section.get("distance_config") or None,
            "timings": section.getboolean("timings", False),
        }
    except ValueError as exc:
        raise ParseError(path, 1, f"bad value in [bench]: {exc}") from None
    if not config["datasets"]:
        raise ParseError(path, 1, "no datasets listed")
    if not config["algorithms"]:
        raise ParseError(path, 1, "no algorithms listed")
    unknown = set(config["algorithms"]) - {"delta-medoids", "one-shot",
                                           "k-centers", "kmedoids-min-k"}
    if unknown:
        raise ParseError(path, 1, f"unknown algorithms: {sorted(unknown)}")
    if not config["deltas"]:
        raise ParseError(path, 1, "no deltas listed")
    if config["distance"] not in ("euclidean", "music", "trajectory"):
        raise ParseError(path, 1,
                         f"bench supports euclidean/music/trajectory, "
                         f"got {config['distance']!r}")
    return config


def _bench_row_cells(row: BenchmarkRow, timings: bool) -> list:
    return [row.dataset, row.algorithm, row.delta, row.repetition, row.seed,
            row.subset_size, row.rep_count, row.rep_pct, row.avg_dist,
            row.max_dist, row.dist_evals, row.wall_ms if timings else None]


def cmd_bench(args) -> int:
    config = _parse_bench_config(args.config)
    loaders = {"euclidean": load_points_csv,
               "music": load_sequences_jsonl,
               "trajectory": load_trajectories_jsonl}
    loader = loaders[config["distance"]]
    datasets = [(os.path.basename(path), loader(path))
                for path in config["datasets"]]
    factory = _oracle_factory(config["distance"], config["distance_config"])
    rows, summaries = benchmark_run(
        datasets, factory, config["algorithms"], config["deltas"],
        config["repetitions"], config["subset_size"], config["seed"],
        restarts=config["restarts"], workers=_workers_from_env())
    for row in rows:
        if not row.legal:
            sys.stderr.write(
                f"warning: illegal cover flagged for {row.dataset}/"
                f"{row.algorithm}/delta={fmt_float(row.delta)}/"
                f"rep={row.repetition}\n")
    csv_rows = []
    summary_by_group = {}
    for summary in summaries:
        summary_by_group.setdefault(
            (summary.dataset, summary.algorithm, summary.delta), []).append(summary)
    emitted = set()
    for row in rows:
        csv_rows.append(_bench_row_cells(row, config["timings"]))
        key = (row.dataset, row.algorithm, row.delta)
        if row.repetition == config["repetitions"] - 1 and key not in emitted:
            emitted.add(key)
            for summary in summary_by_group[key]:
                csv_rows.append([
                    summary.dataset, summary.algorithm, summary.delta,
                    summary.statistic, "", summary.subset_size,
                    summary.rep_count, summary.rep_pct, summary.avg_dist,
                    summary.max_dist, summary.dist_evals,
                    summary.wall_ms if config["timings"] else None])
    csv_text = dumps_csv(BENCH_COLUMNS, csv_rows)
    write_text(config["out"], csv_text)
    manifest = build_manifest("bench", {"argv": args.raw_argv, **config},
                              args.config, config["out"])
    write_manifest_sidecar(config["out"], manifest)
    if config["svg"]:
        from repsel.plotting import render_benchmark_svg

        write_text(config["svg"], render_benchmark_svg(summaries))
    return 0


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------

def _parse_range(raw) -> tuple[float, float]:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 2:
        raise ValueError(f"expected 'lo,hi', got {raw!r}")
    return float(parts[0]), float(parts[1])


def cmd_gen(args) -> int:
    if args.kind == "gaussian":
        dataset = gen_multimodal_gaussian(
            args.seed, args.dims, args.modes, args.samples_per_mode,
            mean_range=_parse_range(args.mean_range),
            var_range=_parse_range(args.var_range))
        points = dataset.items
    elif args.kind == "line":
        points = (args.start + args.step * np.arange(args.n)).reshape(-1, 1)
    elif args.kind == "grid":
        rows = np.arange(args.rows) * args.step
        cols = np.arange(args.cols) * args.step
        points = np.array([[r, c] for r in rows for c in cols], dtype=float)
    else:
        raise ValueError(f"unknown kind {args.kind!r}")
    lines = [",".join(fmt_float(v) for v in row) for row in points]
    write_text(args.out, "\n".join(lines) + ("\n" if lines else ""))
    manifest = build_manifest("gen", {
        "argv": args.raw_argv,
        "kind": args.kind, "seed": args.seed, "dims": args.dims,
        "modes": args.modes, "samples_per_mode": args.samples_per_mode,
        "mean_range": args.mean_range, "var_range": args.var_range,
        "n": args.n, "start": args.start, "step": args.step,
        "rows": args.rows, "cols": args.cols,
    }, None, args.out)
    write_manifest_sidecar(args.out, manifest)
    return 0


# ---------------------------------------------------------------------------
# dist
# ---------------------------------------------------------------------------

def cmd_dist(args) -> int:
    dataset, oracle, _ = load_dataset_and_oracle(
        args.input, args.distance, args.distance_config)
    value = oracle.distance(args.from_id, args.to_id)
    sys.stdout.write(fmt_float(value) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repsel",
        description="Representative selection under a pairwise distance criterion.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_distance_flags(p):
        p.add_argument("--distance", choices=DISTANCES, required=True,
                       help="distance kind; implies the input format")
        p.add_argument("--distance-config", default=None,
                       help="INI file overriding distance-model parameters")

    p = sub.add_parser("select", help="compute a representative set")
    p.add_argument("input")
    add_distance_flags(p)
    p.add_argument("--algorithm", choices=SELECT_ALGORITHMS, required=True)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=1,
                   help="k-medoids restarts inside kmedoids-min-k")
    p.add_argument("--shuffle", action="store_true",
                   help="scan samples in a seeded shuffled order")
    p.add_argument("--merge-refine", action="store_true",
                   help="merge close clusters after each delta-medoids iteration")
    p.add_argument("--timings", action="store_true",
                   help="embed wall-clock timings (breaks byte-determinism)")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_select)

    p = sub.add_parser("eval", help="coverage-check a solution file")
    p.add_argument("input")
    p.add_argument("solution")
    add_distance_flags(p)
    p.add_argument("--delta", type=float, default=None)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("stability", help="overlap of representative sets across reruns")
    p.add_argument("input")
    add_distance_flags(p)
    p.add_argument("--algorithm", choices=STABILITY_ALGORITHMS, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--shuffles", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bin-width", type=float, default=0.05)
    p.add_argument("--restarts", type=int, default=3)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_stability)

    p = sub.add_parser("bench", help="run the benchmark harness from a config file")
    p.add_argument("config")
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("gen", help="generate a synthetic points dataset")
    p.add_argument("--kind", choices=("gaussian", "line", "grid"), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", type=int, default=2)
    p.add_argument("--modes", type=int, default=3)
    p.add_argument("--samples-per-mode", type=int, default=100)
    p.add_argument("--mean-range", default="-10,10")
    p.add_argument("--var-range", default="0.5,2")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("--rows", type=int, default=5)
    p.add_argument("--cols", type=int, default=5)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("dist", help="print a single pairwise distance")
    p.add_argument("input")
    add_distance_flags(p)
    p.add_argument("--from", dest="from_id", type=int, required=True)
    p.add_argument("--to", dest="to_id", type=int, required=True)
    p.set_defaults(handler=cmd_dist)

    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    args.raw_argv = list(argv)
    try:
        return args.handler(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except DistanceContractError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except NoCoverError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 4
    except (ValueError, IndexError, KeyError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def run():  # console-script entry point
    raise SystemExit(main())


if __name__ == "__main__":
    run()
