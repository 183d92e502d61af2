"""Command-line surface: prepare, inject-missing, search, benchmark,
stats, report.

Exit codes: 0 success, 2 input/config error, 3 benchmark finished with
failed grid cells. All state is explicit (config file + flags); under
--deterministic every output byte is reproducible.
"""

import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

from . import data, driver, report, stats
from .genome import SearchSpace
from .objective import EvalConfig
from .pbmh import ALGORITHM_NAMES, ConfigError, canonical_name

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PARTIAL = 3

_EVAL_KEYS = {"folds", "epochs", "batch_size", "seed"}
_SPACE_KEYS = {"neuron_min", "neuron_max", "max_layers", "solver_count"}
_CONFIG_KEYS = {"algorithms", "max_layers", "stage_budget",
                "population_size", "repeats", "missing_rates", "eval",
                "master_seed", "space", "dataset"}
_DATASET_KEYS = {"type", "n", "p", "classes", "separation", "seed",
                 "path", "mask"}


def _check_keys(mapping, allowed, context):
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(
            f"unknown {context} keys: {', '.join(sorted(unknown))}")


def load_config(path):
    """Parse a config JSON into (SearchConfig, dataset_spec)."""
    with open(path) as fh:
        raw = json.load(fh)
    _check_keys(raw, _CONFIG_KEYS, "config")

    eval_raw = raw.get("eval", {})
    _check_keys(eval_raw, _EVAL_KEYS, "eval")
    eval_cfg = EvalConfig(
        folds=eval_raw.get("folds", 10),
        epochs=eval_raw.get("epochs", 50),
        batch_size=eval_raw.get("batch_size", 32),
        seed=eval_raw.get("seed", 0),
    )

    max_layers = raw.get("max_layers", 8)
    space_raw = raw.get("space", {})
    _check_keys(space_raw, _SPACE_KEYS, "space")
    space = SearchSpace(
        neuron_min=space_raw.get("neuron_min", 1),
        neuron_max=space_raw.get("neuron_max", 400),
        max_layers=space_raw.get("max_layers", max_layers),
    )

    algorithms = tuple(canonical_name(a)
                       for a in raw.get("algorithms", ALGORITHM_NAMES))
    cfg = driver.SearchConfig(
        max_layers=max_layers,
        stage_budget=raw.get("stage_budget", 30),
        population_size=raw.get("population_size", 10),
        repeats=raw.get("repeats", 10),
        missing_rates=tuple(raw.get("missing_rates",
                                    (0.0, 0.05, 0.2, 0.4))),
        algorithms=algorithms,
        eval=eval_cfg,
        master_seed=raw.get("master_seed", 0),
        space=space,
    )

    dataset_spec = raw.get("dataset")
    if dataset_spec is not None:
        _check_keys(dataset_spec, _DATASET_KEYS, "dataset")
    return cfg, dataset_spec


def load_dataset(spec, base_dir="."):
    if spec is None:
        raise ConfigError("config has no 'dataset' entry")
    kind = spec.get("type")
    if kind == "synthetic":
        return data.synthesize(
            n=spec.get("n", 600), p=spec.get("p", 12),
            n_classes=spec.get("classes", 3),
            separation=spec.get("separation", 4.0),
            seed=spec.get("seed", 0))
    if kind == "csv":
        path = os.path.join(base_dir, spec["path"])
        return data.read_dataset_csv(path)
    raise ConfigError(f"unknown dataset type {kind!r}")


def cmd_prepare(args):
    with open(args.schema) as fh:
        schema = data.DataSchema.from_dict(json.load(fh))
    os.makedirs(args.output, exist_ok=True)
    with open(args.input, newline="") as fh:
        ds = data.ingest(fh, schema)
    out_csv = os.path.join(args.output, "prepared.csv")
    data.write_dataset_csv(ds, out_csv)
    histogram = {name: int(np.count_nonzero(ds.y == i))
                 for i, name in enumerate(data.CLASS_NAMES)}
    with open(os.path.join(args.output, "label_histogram.json"), "w") as fh:
        json.dump(histogram, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if ds.n == 0:
        print("warning: no labeled pairs survived preprocessing",
              file=sys.stderr)
    print(f"wrote {ds.n} rows to {out_csv}; labels {histogram}")
    return EXIT_OK


def cmd_inject_missing(args):
    ds = data.read_dataset_csv(args.input)
    masked = data.inject_missing(ds, args.rate, args.seed)
    os.makedirs(args.out, exist_ok=True)
    masked_csv = os.path.join(args.out, "masked.csv")
    mask_csv = os.path.join(args.out, "mask.csv")
    data.write_dataset_csv(
        data.LabeledDataset(X=masked.X, y=masked.y,
                            feature_names=masked.feature_names),
        masked_csv)
    data.write_mask_csv(masked, mask_csv)
    removed = int(masked.M.size - masked.M.sum())
    print(f"masked {removed} of {masked.M.size} entries "
          f"-> {masked_csv}, {mask_csv}")
    return EXIT_OK


def _search_config(args):
    if args.config:
        cfg, dataset_spec = load_config(args.config)
    else:
        cfg, dataset_spec = driver.SearchConfig(), None
    if args.master_seed is not None:
        cfg = replace(cfg, master_seed=args.master_seed)
    if args.repeats is not None:
        cfg = replace(cfg, repeats=args.repeats)
    return cfg, dataset_spec


def cmd_search(args):
    cfg, dataset_spec = _search_config(args)
    algorithm = canonical_name(args.algorithm)
    if args.data:
        if args.mask:
            ds = data.read_masked_csv(args.data, args.mask)
        else:
            ds = data.as_masked(data.read_dataset_csv(args.data))
    else:
        ds = data.as_masked(load_dataset(dataset_spec))
    record = driver.layer_growth_search(
        algorithm, ds, cfg,
        seed=driver.seed_derive(cfg.master_seed, "search", algorithm),
        deterministic=args.deterministic)
    os.makedirs(args.out, exist_ok=True)
    out_path = os.path.join(args.out, "run.json")
    with open(out_path, "w") as fh:
        json.dump(record.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"{algorithm}: fitness={record.fitness:.2f} "
          f"accuracy={record.accuracy:.2f} "
          f"architecture={record.architecture['hidden_layer_sizes']} "
          f"solver={record.architecture['solver_name']} -> {out_path}")
    return EXIT_OK


def cmd_benchmark(args):
    cfg, dataset_spec = _search_config(args)
    ds = load_dataset(dataset_spec,
                      base_dir=os.path.dirname(args.config) or ".")
    os.makedirs(args.out, exist_ok=True)
    results_path = os.path.join(args.out, "results.jsonl")

    def progress(record):
        status = "FAILED" if record.error else f"acc={record.accuracy:.2f}"
        print(f"  {record.algorithm} rate={record.missing_rate} "
              f"repeat={record.repeat}: {status}")

    records = driver.run_benchmark(
        ds, cfg, out_path=results_path,
        deterministic=args.deterministic,
        progress=None if args.quiet else progress,
        jobs=args.jobs)

    failures = [
        {"algorithm": r.algorithm, "missing_rate": r.missing_rate,
         "repeat": r.repeat, "error": r.error}
        for r in records if r.error
    ]
    manifest = driver.config_manifest(cfg, deterministic=args.deterministic)
    manifest["dataset"] = dataset_spec
    manifest["records"] = len(records)
    manifest["failures"] = failures
    with open(os.path.join(args.out, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"{len(records)} records -> {results_path} "
          f"({len(failures)} failures)")
    return EXIT_PARTIAL if failures else EXIT_OK


def _paired_scores(records, algorithms):
    """Per-algorithm accuracy vectors paired over the (rate, repeat)
    cells that every algorithm completed."""
    table = {}
    for r in records:
        if not r.error:
            table[(r.algorithm, r.missing_rate, r.repeat)] = r.accuracy
    keys = None
    for alg in algorithms:
        cells = {(rate, rep) for (a, rate, rep) in table if a == alg}
        keys = cells if keys is None else keys & cells
    keys = sorted(keys or [])
    return [np.array([table[(alg, rate, rep)] for rate, rep in keys])
            for alg in algorithms]


def cmd_stats(args):
    records = driver.load_records(args.results)
    clean, _ = report.split_records(records)
    algorithms = report.algorithms_in(clean)
    if len(algorithms) < 2:
        print("need results for at least 2 algorithms", file=sys.stderr)
        return EXIT_INPUT
    rates = report.rates_in(clean)
    os.makedirs(args.out, exist_ok=True)

    rows = report.summary_rows(clean)
    report.write_summary_csv(os.path.join(args.out, "summary.csv"), rows)

    # Friedman: blocks = missing-rate conditions, cells = mean accuracy
    mean_acc = {(r["algorithm"], r["missing_rate"]): r["accuracy_mean"]
                for r in rows}
    matrix = [[mean_acc[(alg, rate)] for alg in algorithms]
              for rate in rates]
    fried = stats.friedman(matrix, alpha=args.alpha)
    fried["treatments"] = algorithms
    fried["blocks"] = rates
    stats.write_friedman_json(os.path.join(args.out, "friedman.json"),
                              fried)

    vectors = _paired_scores(clean, algorithms)
    verdicts = stats.pairwise_verdicts(vectors, alpha=args.alpha)
    stats.write_wilcoxon_matrix_csv(
        os.path.join(args.out, "wilcoxon_matrix.csv"), algorithms,
        verdicts)
    stats.write_win_tie_loss_csv(
        os.path.join(args.out, "win_tie_loss.csv"), algorithms,
        stats.win_tie_loss(verdicts))

    stability_values = []
    if len(rates) >= 2:
        for alg in algorithms:
            stability_values.append(stats.stability(
                [mean_acc[(alg, rate)] for rate in rates]))
    stats.write_stability_csv(os.path.join(args.out, "stability.csv"),
                              algorithms if stability_values else [],
                              stability_values)
    print(f"stats written to {args.out} "
          f"(chi2={fried['chi2']:.3f}, p={fried['p_value']:.3g})")
    return EXIT_OK


def cmd_report(args):
    records = driver.load_records(args.results)
    os.makedirs(args.out, exist_ok=True)
    tables = report.best_architectures(records)
    written = []
    for rate, rows in tables.items():
        path = os.path.join(args.out, f"architectures_rate_{rate:g}.csv")
        report.write_architecture_csv(path, rows)
        written.append(path)
    if not tables:
        path = os.path.join(args.out, "architectures.csv")
        report.write_architecture_csv(path, [])
        written.append(path)
    svg_path = os.path.join(args.out, "accuracy_by_algorithm.svg")
    with open(svg_path, "w") as fh:
        fh.write(report.accuracy_bar_chart(records))
        fh.write("\n")
    written.append(svg_path)
    print("report written: " + ", ".join(written))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="evomlp",
        description="metaheuristic architecture search for masked-input "
                    "energy classification")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare",
                       help="ingest a raw battery trace into a labeled CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("inject-missing",
                       help="zero out a fraction of entries with a mask")
    p.add_argument("--input", required=True)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_inject_missing)

    p = sub.add_parser("search",
                       help="one layer-growth search with one algorithm")
    p.add_argument("--algorithm", required=True)
    p.add_argument("--data")
    p.add_argument("--mask")
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.add_argument("--master-seed", type=int, default=None)
    p.add_argument("--repeats", type=int, default=None)
    p.add_argument("--deterministic", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("benchmark",
                       help="full algorithms x rates x repeats grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--master-seed", type=int, default=None)
    p.add_argument("--repeats", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes for grid cells")
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("stats",
                       help="nonparametric comparison of a results file")
    p.add_argument("--results", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("report",
                       help="architecture tables and accuracy chart")
    p.add_argument("--results", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, data.SchemaError, data.RowParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
