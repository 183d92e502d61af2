"""The thirteen population-based optimizers on a 10-D sphere.

One shared interface drives them all: give it bounds, a population size,
an evaluation budget and a seed, and it spends exactly that many
objective calls and returns the best point it ever evaluated. The trace
records every evaluation, so the incumbent curve is always available.
"""

import numpy as np

from evomlp.pbmh import ALGORITHM_NAMES, minimize


def sphere(x):
    return float(np.sum(np.asarray(x) ** 2))


lo, hi = np.full(10, -5.0), np.full(10, 5.0)
budget = 2000

print(f"{'algorithm':9s} {'initial best':>13s} {'final best':>12s} "
      f"{'reduction':>10s}")
for algorithm in ALGORITHM_NAMES:
    result = minimize(algorithm, sphere, lo, hi, population_size=10,
                      budget=budget, seed=1)
    initial = float(np.min(result.trace[:10]))
    print(f"{algorithm:9s} {initial:13.2f} {result.fitness:12.6f} "
          f"{initial / max(result.fitness, 1e-300):9.0f}x")

print(f"\neach row spent exactly {budget} evaluations")
