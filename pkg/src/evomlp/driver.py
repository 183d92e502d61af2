"""Layer-growth search per algorithm and the full benchmark grid.

A run sweeps the hidden-layer count from 1 to max_layers, spending a
fixed evaluation budget per count; the incumbent best genome is grown to
the new layer count and injected into each next stage. The benchmark
crosses algorithms x missing rates x repeats, with one fixed mask per
rate so every algorithm faces identical missingness.
"""

import json
import multiprocessing
import time
from dataclasses import dataclass, field

import numpy as np

from . import objective
from .data import LabeledDataset, as_masked, inject_missing
from .genome import SearchSpace, decode, grow
from .objective import EvalConfig
from .pbmh import ALGORITHM_NAMES, OptimizerConfig, optimize_stage
from .seeding import derive_seed

seed_derive = derive_seed  # public alias: the driver owns seed derivation


@dataclass(frozen=True)
class SearchConfig:
    max_layers: int = 8
    stage_budget: int = 30
    population_size: int = 10
    repeats: int = 10
    missing_rates: tuple = (0.0, 0.05, 0.2, 0.4)
    algorithms: tuple = ALGORITHM_NAMES
    eval: EvalConfig = field(default_factory=EvalConfig)
    master_seed: int = 0
    space: SearchSpace = field(default_factory=SearchSpace)


@dataclass
class RunRecord:
    algorithm: str
    missing_rate: float
    repeat: int
    fitness: float
    accuracy: float
    f_measure: float
    architecture: dict
    genome: dict
    stage_traces: list
    n_evaluations: int
    seed: int
    wall_time: float = None
    error: str = None

    def to_dict(self):
        d = {
            "algorithm": self.algorithm,
            "missing_rate": self.missing_rate,
            "repeat": self.repeat,
            "fitness": self.fitness,
            "accuracy": self.accuracy,
            "f_measure": self.f_measure,
            "architecture": self.architecture,
            "genome": self.genome,
            "stage_traces": self.stage_traces,
            "n_evaluations": self.n_evaluations,
            "seed": self.seed,
        }
        if self.wall_time is not None:
            d["wall_time"] = self.wall_time
        if self.error is not None:
            d["error"] = self.error
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            algorithm=d["algorithm"],
            missing_rate=d["missing_rate"],
            repeat=d["repeat"],
            fitness=d["fitness"],
            accuracy=d["accuracy"],
            f_measure=d["f_measure"],
            architecture=d["architecture"],
            genome=d["genome"],
            stage_traces=d["stage_traces"],
            n_evaluations=d["n_evaluations"],
            seed=d["seed"],
            wall_time=d.get("wall_time"),
            error=d.get("error"),
        )


class _BestTracker:
    """Scores genomes, counts calls, and remembers the best EvalResult."""

    def __init__(self, ds, eval_cfg, space):
        self.ds = ds
        self.eval_cfg = eval_cfg
        self.space = space
        self.calls = 0
        self.best_fitness = np.inf
        self.best_genome = None
        self.best_result = None

    def __call__(self, genome):
        result = objective.evaluate(genome, self.ds, self.eval_cfg,
                                    self.space)
        self.calls += 1
        if result.fitness < self.best_fitness:
            self.best_fitness = result.fitness
            self.best_genome = genome
            self.best_result = result
        return result.fitness


def _grow_to(genome, space, n_layers, rng):
    while genome.n_layers < n_layers:
        genome = grow(genome, space, rng)
    return genome


def layer_growth_search(algorithm, ds, cfg, seed, deterministic=False):
    """One full run: max_layers stages, stage_budget evaluations each.

    Returns a RunRecord for the best genome over all stages; fitness and
    the reported accuracy/F-measure come from the same evaluation.
    """
    started = time.perf_counter()
    tracker = _BestTracker(ds, cfg.eval, cfg.space)
    stage_traces = []
    for n_layers in range(1, cfg.max_layers + 1):
        warm = None
        if tracker.best_genome is not None:
            warm = _grow_to(tracker.best_genome, cfg.space, n_layers,
                            np.random.default_rng(
                                derive_seed(seed, "grow", n_layers)))
        stage = optimize_stage(
            OptimizerConfig(algorithm=algorithm,
                            population_size=cfg.population_size,
                            stage_budget=cfg.stage_budget,
                            seed=derive_seed(seed, "stage", n_layers)),
            cfg.space, n_layers, tracker, warm_start=warm)
        stage_traces.append(list(stage.trace))

    expected = cfg.max_layers * cfg.stage_budget
    if tracker.calls != expected:
        raise RuntimeError(
            f"evaluation ledger mismatch: {tracker.calls} != {expected}")

    spec = decode(tracker.best_genome, cfg.space)
    return RunRecord(
        algorithm=algorithm,
        missing_rate=round(1.0 - float(np.mean(ds.M)), 6),
        repeat=0,
        fitness=tracker.best_fitness,
        accuracy=tracker.best_result.accuracy,
        f_measure=tracker.best_result.f_measure,
        architecture={
            "hidden_layer_sizes": list(spec.hidden_layer_sizes),
            "solver_id": spec.solver_id,
            "solver_name": spec.solver_name,
            "learning_rate": spec.active_params["learning_rate"],
            "active_params": spec.active_params,
        },
        genome=tracker.best_genome.to_dict(),
        stage_traces=stage_traces,
        n_evaluations=tracker.calls,
        seed=seed,
        wall_time=None if deterministic else time.perf_counter() - started,
    )


def _benchmark_cell(task):
    """One grid cell; errors become error records so the grid survives."""
    masked, algorithm, rate, rep, cfg, run_seed, deterministic = task
    try:
        record = layer_growth_search(algorithm, masked, cfg, run_seed,
                                     deterministic=deterministic)
        record.missing_rate = rate
        record.repeat = rep
    except Exception as exc:
        record = RunRecord(
            algorithm=algorithm, missing_rate=rate, repeat=rep,
            fitness=None, accuracy=None, f_measure=None, architecture={},
            genome={}, stage_traces=[], n_evaluations=0, seed=run_seed,
            error=f"{type(exc).__name__}: {exc}")
    return record


def run_benchmark(ds, cfg, out_path=None, deterministic=False,
                  progress=None, jobs=1):
    """Full grid: every (missing rate, algorithm, repeat) cell.

    Masks are drawn once per rate, so all algorithms and repeats face the
    same missingness. A failing cell becomes an error record and the
    benchmark keeps going. Records append to out_path (JSON lines) in
    grid order as they complete; jobs > 1 runs cells in a process pool
    (the output is identical, persistence stays ordered).
    """
    if not isinstance(ds, LabeledDataset):
        raise TypeError("run_benchmark expects a complete LabeledDataset")

    tasks = []
    for rate in cfg.missing_rates:
        masked = (as_masked(ds) if rate == 0 else
                  inject_missing(ds, rate,
                                 derive_seed(cfg.master_seed, "mask",
                                             rate)))
        for algorithm in cfg.algorithms:
            for rep in range(cfg.repeats):
                run_seed = derive_seed(cfg.master_seed, "run", algorithm,
                                       rate, rep)
                tasks.append((masked, algorithm, rate, rep, cfg, run_seed,
                              deterministic))

    sink = open(out_path, "w") if out_path else None
    records = []
    pool = multiprocessing.Pool(jobs) if jobs > 1 else None
    try:
        produced = (pool.imap(_benchmark_cell, tasks) if pool
                    else map(_benchmark_cell, tasks))
        for record in produced:
            records.append(record)
            if sink:
                sink.write(json.dumps(record.to_dict(), sort_keys=True)
                           + "\n")
                sink.flush()
            if progress:
                progress(record)
    finally:
        if pool:
            pool.close()
            pool.join()
        if sink:
            sink.close()
    return records


def desk_config(algorithms=("DE", "PSO", "CMA-ES"), master_seed=0):
    """Small configuration for end-to-end runs on synthetic data.

    Narrow networks train to their ceiling within the epoch budget, so
    the whole grid stays desk-scale."""
    return SearchConfig(
        max_layers=2, stage_budget=10, population_size=6, repeats=3,
        missing_rates=(0.0, 0.4), algorithms=tuple(algorithms),
        eval=EvalConfig(folds=3, epochs=60, batch_size=32, seed=0),
        master_seed=master_seed,
        space=SearchSpace(neuron_min=8, neuron_max=64, max_layers=2),
    )


def load_records(path):
    records = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(RunRecord.from_dict(json.loads(line)))
    return records


def config_manifest(cfg, deterministic=False):
    """Everything needed to reproduce a benchmark, minus timestamps."""
    from .pbmh import algorithm_constants
    from .solvers import SOLVER_NAMES

    manifest = {
        "config": {
            "max_layers": cfg.max_layers,
            "stage_budget": cfg.stage_budget,
            "population_size": cfg.population_size,
            "repeats": cfg.repeats,
            "missing_rates": list(cfg.missing_rates),
            "algorithms": list(cfg.algorithms),
            "eval": {
                "folds": cfg.eval.folds,
                "epochs": cfg.eval.epochs,
                "batch_size": cfg.eval.batch_size,
                "seed": cfg.eval.seed,
            },
            "master_seed": cfg.master_seed,
            "space": {
                "neuron_min": cfg.space.neuron_min,
                "neuron_max": cfg.space.neuron_max,
                "max_layers": cfg.space.max_layers,
                "solver_count": cfg.space.solver_count,
            },
        },
        "algorithm_constants": algorithm_constants(),
        "solver_names": {str(k): v for k, v in SOLVER_NAMES.items()},
        "version": "0.1.0",
    }
    if not deterministic:
        manifest["created"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    return manifest
