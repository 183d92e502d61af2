"""Shared machinery for the population-based optimizers.

Every algorithm runs behind the same contract: it gets an evaluation
budget, spends exactly that many objective calls (initial population
included), keeps every candidate inside the box bounds, and the best
solution ever evaluated is what the stage reports (elitism is enforced
here, not inside each algorithm's own selection scheme).
"""

from dataclasses import dataclass

import numpy as np


class ConfigError(ValueError):
    """Optimizer configuration violates its invariants."""


@dataclass(frozen=True)
class OptimizerConfig:
    algorithm: str
    population_size: int = 10
    stage_budget: int = 30
    seed: int = 0


@dataclass(frozen=True)
class OptResult:
    """Outcome of one fixed-dimension stage on raw vectors."""

    x: np.ndarray
    fitness: float
    trace: np.ndarray  # raw objective value of every evaluation, in order

    def incumbent_trace(self):
        return np.minimum.accumulate(self.trace)


class Budget:
    """Counts objective calls and tracks the incumbent best."""

    def __init__(self, fn, limit):
        self.fn = fn
        self.limit = int(limit)
        self.used = 0
        self.trace = []
        self.best_x = None
        self.best_f = np.inf

    @property
    def remaining(self):
        return self.limit - self.used

    @property
    def exhausted(self):
        return self.used >= self.limit

    def eval(self, x):
        if self.exhausted:
            raise RuntimeError("evaluation budget exhausted")
        f = float(self.fn(x))
        self.used += 1
        self.trace.append(f)
        if f < self.best_f:
            self.best_f = f
            self.best_x = np.array(x, dtype=float)
        return f

    @property
    def progress(self):
        return self.used / self.limit


def clip(x, lo, hi):
    return np.clip(x, lo, hi)


def init_population(budget, lo, hi, pop_size, rng, x0=None):
    """Uniform initial population; x0 (if given) replaces member 0."""
    d = lo.size
    X = rng.uniform(lo, hi, size=(pop_size, d))
    if x0 is not None:
        X[0] = clip(np.asarray(x0, dtype=float), lo, hi)
    f = np.empty(pop_size)
    for i in range(pop_size):
        f[i] = budget.eval(X[i])
    return X, f


def tournament(f, rng, size=2):
    """Index of the fittest among `size` uniformly drawn members."""
    contenders = rng.integers(0, f.size, size=size)
    return contenders[np.argmin(f[contenders])]


def distinct_indices(rng, n, count, exclude):
    """`count` distinct indices in [0, n) avoiding `exclude` and each
    other."""
    taken = set(exclude)
    out = []
    while len(out) < count:
        r = int(rng.integers(0, n))
        if r not in taken:
            taken.add(r)
            out.append(r)
    return out


def binomial_crossover(target, donor, cr, rng):
    d = target.size
    pick = rng.random(d) <= cr
    pick[rng.integers(0, d)] = True
    return np.where(pick, donor, target)
