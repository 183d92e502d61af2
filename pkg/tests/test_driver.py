import json

import numpy as np
import pytest

from evomlp.data import as_masked, synthesize
from evomlp.driver import (RunRecord, SearchConfig, config_manifest,
                           layer_growth_search, load_records, run_benchmark,
                           seed_derive)
from evomlp.genome import SearchSpace
from evomlp.objective import EvalConfig


def tiny_config(**overrides):
    base = dict(
        max_layers=2, stage_budget=8, population_size=4, repeats=2,
        missing_rates=(0.0, 0.4), algorithms=("DE", "PSO"),
        eval=EvalConfig(folds=2, epochs=2, batch_size=16, seed=0),
        master_seed=7,
        space=SearchSpace(neuron_min=1, neuron_max=8, max_layers=2),
    )
    base.update(overrides)
    return SearchConfig(**base)


@pytest.fixture(scope="module")
def blob_data():
    return synthesize(60, 4, 3, separation=3.0, seed=5)


def test_seed_derive_deterministic_and_order_free():
    assert seed_derive(1, "a", 2) == seed_derive(1, "a", 2)
    assert seed_derive(1, "a", 2) != seed_derive(1, "a", 3)
    assert seed_derive(1, "a", 2) != seed_derive(2, "a", 2)
    # derivation depends only on the labels, not on call order
    first = seed_derive(0, "run", "DE", 0.1, 3)
    seed_derive(0, "other", "noise")
    assert seed_derive(0, "run", "DE", 0.1, 3) == first


def test_seed_derive_no_collisions_over_grid():
    algorithms = [f"alg{i}" for i in range(13)]
    seeds = {
        seed_derive(0, "run", alg, rate, rep)
        for alg in algorithms
        for rate in (0.0, 0.05, 0.2, 0.4)
        for rep in range(10)
    }
    assert len(seeds) == 13 * 4 * 10


def test_layer_growth_budget_ledger(blob_data):
    cfg = tiny_config()
    record = layer_growth_search("DE", as_masked(blob_data), cfg, seed=1)
    assert record.n_evaluations == cfg.max_layers * cfg.stage_budget
    assert [len(t) for t in record.stage_traces] == [cfg.stage_budget] * 2


def test_layer_growth_default_ledger_is_240(blob_data, monkeypatch):
    # full-scale defaults: 8 layer stages x 30 evaluations; evaluation is
    # stubbed so only the accounting is exercised
    import evomlp.driver as driver_mod
    from evomlp.objective import EvalResult

    def fake_evaluate(genome, ds, cfg, space=None):
        fitness = float(np.sum(np.array(genome.neurons) ** 2) % 100.0)
        return EvalResult(fitness=fitness, accuracy=100.0 - fitness,
                          f_measure=100.0 - fitness, per_fold=())

    monkeypatch.setattr(driver_mod.objective, "evaluate", fake_evaluate)
    cfg = SearchConfig()  # paper-scale defaults
    record = layer_growth_search("GA", as_masked(blob_data), cfg, seed=0)
    assert record.n_evaluations == 8 * 30 == 240
    assert len(record.stage_traces) == 8


def test_layer_growth_single_stage(blob_data):
    cfg = tiny_config(max_layers=1,
                      space=SearchSpace(neuron_min=1, neuron_max=8,
                                        max_layers=1))
    record = layer_growth_search("DE", as_masked(blob_data), cfg, seed=1)
    assert record.n_evaluations == cfg.stage_budget
    assert len(record.stage_traces) == 1


def test_layer_growth_best_is_global_min(blob_data):
    cfg = tiny_config()
    record = layer_growth_search("PSO", as_masked(blob_data), cfg, seed=2)
    flat = [f for trace in record.stage_traces for f in trace]
    assert record.fitness == min(flat)
    assert record.accuracy == pytest.approx(100.0 - record.fitness)
    assert 1 <= len(record.architecture["hidden_layer_sizes"]) <= 2
    assert record.architecture["solver_name"]
    assert "learning_rate" in record.architecture


def test_layer_growth_deterministic(blob_data):
    cfg = tiny_config()
    a = layer_growth_search("DE", as_masked(blob_data), cfg, seed=3,
                            deterministic=True)
    b = layer_growth_search("DE", as_masked(blob_data), cfg, seed=3,
                            deterministic=True)
    assert a.to_dict() == b.to_dict()


def test_run_record_round_trip(blob_data):
    cfg = tiny_config()
    record = layer_growth_search("DE", as_masked(blob_data), cfg, seed=4)
    clone = RunRecord.from_dict(
        json.loads(json.dumps(record.to_dict(), sort_keys=True)))
    assert clone.to_dict() == record.to_dict()


def test_benchmark_grid_cardinality(blob_data, tmp_path):
    cfg = tiny_config()
    out = tmp_path / "results.jsonl"
    records = run_benchmark(blob_data, cfg, out_path=str(out),
                            deterministic=True)
    assert len(records) == 2 * 2 * 2  # rates x algorithms x repeats
    cells = {(r.algorithm, r.missing_rate, r.repeat) for r in records}
    assert len(cells) == len(records)
    loaded = load_records(str(out))
    assert [r.to_dict() for r in loaded] == [r.to_dict() for r in records]


def test_benchmark_deterministic_reproduces_accuracy(blob_data):
    cfg = tiny_config(repeats=1, algorithms=("DE",))
    a = run_benchmark(blob_data, cfg, deterministic=True)
    b = run_benchmark(blob_data, cfg, deterministic=True)
    assert [r.accuracy for r in a] == [r.accuracy for r in b]
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]


def test_benchmark_failed_cell_recorded_and_skipped(blob_data):
    cfg = tiny_config(algorithms=("DE", "bogus"), repeats=1)
    records = run_benchmark(blob_data, cfg, deterministic=True)
    assert len(records) == 4
    failed = [r for r in records if r.error]
    assert len(failed) == 2  # the bogus algorithm in both rates
    assert all(r.algorithm == "bogus" for r in failed)
    assert all(not r.error for r in records if r.algorithm == "DE")


def test_benchmark_rejects_masked_dataset(blob_data):
    with pytest.raises(TypeError):
        run_benchmark(as_masked(blob_data), tiny_config())


def test_benchmark_parallel_matches_sequential(blob_data):
    cfg = tiny_config(repeats=1)
    sequential = run_benchmark(blob_data, cfg, deterministic=True, jobs=1)
    parallel = run_benchmark(blob_data, cfg, deterministic=True, jobs=2)
    assert [r.to_dict() for r in sequential] \
        == [r.to_dict() for r in parallel]


def test_wall_time_omitted_when_deterministic(blob_data):
    cfg = tiny_config(repeats=1, algorithms=("DE",),
                      missing_rates=(0.0,))
    rec = run_benchmark(blob_data, cfg, deterministic=True)[0]
    assert "wall_time" not in rec.to_dict()
    rec = run_benchmark(blob_data, cfg, deterministic=False)[0]
    assert rec.to_dict()["wall_time"] > 0


def test_manifest_contents():
    cfg = tiny_config()
    manifest = config_manifest(cfg, deterministic=True)
    assert manifest["config"]["stage_budget"] == 8
    assert "GA" in manifest["algorithm_constants"]
    assert manifest["solver_names"]["9"] == "Rprop"
    assert "created" not in manifest
    assert "created" in config_manifest(cfg, deterministic=False)
