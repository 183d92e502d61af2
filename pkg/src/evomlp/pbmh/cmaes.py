"""(mu/mu_w, lambda) covariance-matrix-adaptation evolution strategy.

Internally the search runs in box-normalized coordinates (every bound
interval mapped to [0, 1]) so one scalar step size serves dimensions with
wildly different spans; candidates are clamped there before evaluation.
"""

import numpy as np

CMAES_CONSTANTS = {"sigma0": 0.3, "lambda": "population_size"}


def run_cmaes(budget, lo, hi, pop_size, rng, x0=None):
    d = lo.size
    span = np.where(hi > lo, hi - lo, 1.0)

    def denorm(z):
        return lo + z * span

    lam = pop_size
    mu = lam // 2
    raw = np.log(lam / 2 + 0.5) - np.log(np.arange(1, mu + 1))
    weights = raw / raw.sum()
    mueff = 1.0 / np.sum(weights ** 2)

    cc = (4 + mueff / d) / (d + 4 + 2 * mueff / d)
    cs = (mueff + 2) / (d + mueff + 5)
    c1 = 2 / ((d + 1.3) ** 2 + mueff)
    cmu = min(1 - c1, 2 * (mueff - 2 + 1 / mueff) / ((d + 2) ** 2 + mueff))
    damps = 1 + 2 * max(0.0, np.sqrt((mueff - 1) / (d + 1)) - 1) + cs
    chi_n = np.sqrt(d) * (1 - 1 / (4 * d) + 1 / (21 * d * d))

    if x0 is not None:
        mean = np.clip((np.asarray(x0, dtype=float) - lo) / span, 0.0, 1.0)
    else:
        mean = rng.uniform(0.0, 1.0, d)
    sigma = CMAES_CONSTANTS["sigma0"]
    pc = np.zeros(d)
    ps = np.zeros(d)
    C = np.eye(d)
    iteration = 0
    inject_mean = x0 is not None  # warm start becomes the first candidate

    while not budget.exhausted:
        iteration += 1
        C = (C + C.T) / 2
        eigvals, B = np.linalg.eigh(C)
        eigvals = np.maximum(eigvals, 1e-20)
        D = np.sqrt(eigvals)

        k = min(lam, budget.remaining)
        Z = rng.standard_normal((k, d))
        if inject_mean:
            Z[0] = 0.0
            inject_mean = False
        X = np.clip(mean + sigma * (Z * D) @ B.T, 0.0, 1.0)
        f = np.array([budget.eval(denorm(x)) for x in X])
        if k < lam:
            break  # truncated generation: no distribution update

        order = np.argsort(f)
        elite = X[order[:mu]]
        old_mean = mean
        mean = weights @ elite

        y = (mean - old_mean) / sigma
        invsqrt_y = B @ ((B.T @ y) / D)
        ps = (1 - cs) * ps + np.sqrt(cs * (2 - cs) * mueff) * invsqrt_y
        ps_norm = np.linalg.norm(ps)
        hsig = (ps_norm
                / np.sqrt(1 - (1 - cs) ** (2 * iteration)) / chi_n
                < 1.4 + 2 / (d + 1))
        pc = (1 - cc) * pc + hsig * np.sqrt(cc * (2 - cc) * mueff) * y

        artmp = (elite - old_mean) / sigma
        C = ((1 - c1 - cmu) * C
             + c1 * (np.outer(pc, pc) + (1 - hsig) * cc * (2 - cc) * C)
             + cmu * artmp.T @ (weights[:, None] * artmp))
        sigma *= np.exp((cs / damps) * (ps_norm / chi_n - 1))
        sigma = float(np.clip(sigma, 1e-12, 2.0))
