"""Thirteen population-based metaheuristics behind one minimizing API.

`minimize` drives any of them on raw bounded vectors; `optimize_stage`
wraps that for genome search at a fixed layer count. Both spend exactly
the requested number of objective evaluations and report the best
candidate ever evaluated.
"""

from dataclasses import dataclass

import numpy as np

from ..genome import Genome
from .cmaes import CMAES_CONSTANTS, run_cmaes
from .core import Budget, ConfigError, OptimizerConfig, OptResult
from .de import (DE_CONSTANTS, JADE_CONSTANTS, LSHADE_CONSTANTS,
                 SAPDE_CONSTANTS, SHADE_CONSTANTS, run_de, run_jade,
                 run_lshade, run_sapde, run_shade)
from .genetic import GA_CONSTANTS, MA_CONSTANTS, run_ga, run_ma
from .swarm import (CLPSO_CONSTANTS, CPSO_CONSTANTS, HPSO_CONSTANTS,
                    PPSO_CONSTANTS, PSO_CONSTANTS, aiwf, clpso_velocity,
                    pso_velocity, ppso_velocity, run_clpso, run_cpso,
                    run_hpso, run_ppso, run_pso)

__all__ = [
    "ALGORITHM_NAMES",
    "Budget",
    "ConfigError",
    "OptResult",
    "OptimizerConfig",
    "StageResult",
    "aiwf",
    "algorithm_constants",
    "canonical_name",
    "clpso_velocity",
    "minimize",
    "optimize_stage",
    "pso_velocity",
    "ppso_velocity",
]

_REGISTRY = {
    "GA": (run_ga, GA_CONSTANTS),
    "DE": (run_de, DE_CONSTANTS),
    "MA": (run_ma, MA_CONSTANTS),
    "PSO": (run_pso, PSO_CONSTANTS),
    "CMA-ES": (run_cmaes, CMAES_CONSTANTS),
    "HPSO": (run_hpso, HPSO_CONSTANTS),
    "CPSO": (run_cpso, CPSO_CONSTANTS),
    "CLPSO": (run_clpso, CLPSO_CONSTANTS),
    "SAP-DE": (run_sapde, SAPDE_CONSTANTS),
    "JADE": (run_jade, JADE_CONSTANTS),
    "SHADE": (run_shade, SHADE_CONSTANTS),
    "LSHADE": (run_lshade, LSHADE_CONSTANTS),
    "PPSO": (run_ppso, PPSO_CONSTANTS),
}

ALGORITHM_NAMES = tuple(_REGISTRY)


def algorithm_constants(name=None):
    """Constants echoed into run manifests for reproducibility."""
    if name is not None:
        return dict(_REGISTRY[canonical_name(name)][1])
    return {alg: dict(consts) for alg, (_, consts) in _REGISTRY.items()}


def canonical_name(name):
    """Case- and hyphen-insensitive lookup of an algorithm id."""
    for alg in _REGISTRY:
        if alg.lower().replace("-", "") == str(name).lower().replace("-", ""):
            return alg
    raise ConfigError(f"unknown algorithm {name!r}; "
                      f"choose from {', '.join(ALGORITHM_NAMES)}")


@dataclass(frozen=True)
class StageResult:
    """Best genome of one fixed-layer-count stage plus its raw fitness
    trace (one entry per evaluation, in evaluation order)."""

    best_genome: Genome
    best_fitness: float
    trace: tuple

    def incumbent_trace(self):
        return np.minimum.accumulate(np.array(self.trace))


def minimize(algorithm, fn, lower, upper, population_size, budget, seed,
             x0=None):
    """Run one algorithm on a bounded vector objective.

    Spends exactly `budget` evaluations (initial population included)
    and returns the incumbent best, regardless of what the algorithm's
    own selection scheme kept alive.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if lower.shape != upper.shape or np.any(lower > upper):
        raise ConfigError("invalid bounds")
    if population_size < 4:
        raise ConfigError("population_size must be >= 4")
    if budget < population_size:
        raise ConfigError(
            f"budget {budget} smaller than population {population_size}")
    runner = _REGISTRY[canonical_name(algorithm)][0]
    tracker = Budget(fn, budget)
    rng = np.random.default_rng(seed)
    runner(tracker, lower, upper, population_size, rng, x0)
    return OptResult(x=tracker.best_x, fitness=tracker.best_f,
                     trace=np.array(tracker.trace))


def optimize_stage(cfg, space, n_layers, evaluator, warm_start=None):
    """Genome search at a fixed layer count.

    evaluator maps a Genome to a scalar fitness; warm_start (same layer
    count) is injected as one member of the initial population.
    """
    if warm_start is not None and warm_start.n_layers != n_layers:
        raise ConfigError(
            f"warm start has {warm_start.n_layers} layers, stage expects "
            f"{n_layers}")
    lower, upper = space.vector_bounds(n_layers)
    result = minimize(
        cfg.algorithm,
        lambda vec: evaluator(Genome.from_vector(vec)),
        lower, upper,
        population_size=cfg.population_size,
        budget=cfg.stage_budget,
        seed=cfg.seed,
        x0=None if warm_start is None else warm_start.to_vector(),
    )
    return StageResult(best_genome=Genome.from_vector(result.x),
                       best_fitness=result.fitness,
                       trace=tuple(result.trace))
