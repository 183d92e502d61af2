"""The 10 gradient-update rules a solver gene can select.

Each rule follows its original formulation and consumes only the
hyperparameters declared in CONSUMED; everything else in the genome is
ignored for that solver. States hold per-tensor slot arrays (moments,
accumulators, per-weight steps) shaped like the trained parameters.
"""

from dataclasses import dataclass, field

import numpy as np

SOLVER_NAMES = {
    1: "Adam",
    2: "Adadelta",
    3: "AdamW",
    4: "Adamax",
    5: "ASGD",
    6: "NAdam",
    7: "RAdam",
    8: "RMSprop",
    9: "Rprop",
    10: "SGD",
}

SOLVER_IDS = {name: sid for sid, name in SOLVER_NAMES.items()}

# Hyperparameters each rule actually reads. "rho" doubles as Adadelta's
# decay and RMSprop's smoothing constant; "lambda" feeds ASGD's decay term
# and NAdam's momentum-decay exponent.
CONSUMED = {
    1: frozenset({"learning_rate", "beta1", "beta2", "weight_decay"}),
    2: frozenset({"learning_rate", "rho", "weight_decay"}),
    3: frozenset({"learning_rate", "beta1", "beta2", "weight_decay"}),
    4: frozenset({"learning_rate", "beta1", "beta2", "weight_decay"}),
    5: frozenset({"learning_rate", "lambda", "weight_decay"}),
    6: frozenset({"learning_rate", "beta1", "beta2", "lambda",
                  "weight_decay"}),
    7: frozenset({"learning_rate", "beta1", "beta2", "weight_decay"}),
    8: frozenset({"learning_rate", "rho", "momentum", "weight_decay"}),
    9: frozenset({"learning_rate"}),
    10: frozenset({"learning_rate", "momentum", "weight_decay"}),
}

EPS = 1e-8
ADADELTA_EPS = 1e-6  # 1e-8 takes hundreds of steps to leave the start


class NumericFaultError(FloatingPointError):
    """Raised when a gradient tensor contains non-finite values."""


@dataclass(frozen=True)
class SolverSpec:
    solver_id: int
    params: dict = field(default_factory=dict)


def consumed_parameters(solver_id):
    """The exact hyperparameter subset the rule reads."""
    try:
        return CONSUMED[solver_id]
    except KeyError:
        raise ValueError(f"unknown solver id {solver_id}") from None


def make_solver(spec, param_shapes):
    """Build a zero-initialized solver state for the given tensor shapes.

    spec.params must contain exactly the consumed parameters for the id.
    """
    consumed = consumed_parameters(spec.solver_id)
    got = set(spec.params)
    if got != set(consumed):
        raise ValueError(
            f"{SOLVER_NAMES[spec.solver_id]} expects params {sorted(consumed)}"
            f", got {sorted(got)}")
    cls = _SOLVER_CLASSES[spec.solver_id]
    return cls(spec.params, [tuple(s) for s in param_shapes])


def _check_grads(grads):
    for i, g in enumerate(grads):
        if not np.all(np.isfinite(g)):
            raise NumericFaultError(f"non-finite gradient for tensor {i}")


def _zeros(shapes):
    return [np.zeros(s) for s in shapes]


class _SolverState:
    """Shared step-counting and weight-decay plumbing."""

    def __init__(self, params, shapes):
        self.p = dict(params)
        # the genome's closed [0.8, 1] interval admits beta = 1 exactly,
        # which would zero the bias-correction denominators
        for key in ("beta1", "beta2"):
            if key in self.p:
                self.p[key] = min(self.p[key], 1.0 - 1e-8)
        self.shapes = shapes
        self.t = 0

    def _decayed(self, param, grad):
        wd = self.p.get("weight_decay", 0.0)
        if wd:
            return grad + wd * param
        return grad

    def step(self, params, grads):
        """Apply one update in place; returns params for chaining."""
        _check_grads(grads)
        self.t += 1
        for i, (w, g) in enumerate(zip(params, grads)):
            self._apply(i, w, np.asarray(g, dtype=float))
        return params


class Adam(_SolverState):
    def __init__(self, params, shapes):
        super().__init__(params, shapes)
        self.m = _zeros(shapes)
        self.v = _zeros(shapes)

    def _apply(self, i, w, g):
        lr, b1, b2 = self.p["learning_rate"], self.p["beta1"], self.p["beta2"]
        g = self._decayed(w, g)
        self.m[i] = b1 * self.m[i] + (1 - b1) * g
        self.v[i] = b2 * self.v[i] + (1 - b2) * g * g
        m_hat = self.m[i] / (1 - b1 ** self.t)
        v_hat = self.v[i] / (1 - b2 ** self.t)
        w -= lr * m_hat / (np.sqrt(v_hat) + EPS)


class Adadelta(_SolverState):
    def __init__(self, params, shapes):
        super().__init__(params, shapes)
        self.sq_avg = _zeros(shapes)
        self.acc_delta = _zeros(shapes)

    def _apply(self, i, w, g):
        lr, rho = self.p["learning_rate"], self.p["rho"]
        g = self._decayed(w, g)
        self.sq_avg[i] = rho * self.sq_avg[i] + (1 - rho) * g * g
        delta = g * np.sqrt(self.acc_delta[i] + ADADELTA_EPS) \
            / np.sqrt(self.sq_avg[i] + ADADELTA_EPS)
        self.acc_delta[i] = rho * self.acc_delta[i] + (1 - rho) * delta * delta
        w -= lr * delta


class AdamW(_SolverState):
    """Adam with the weight decay decoupled from the moments."""

    def __init__(self, params, shapes):
        super().__init__(params, shapes)
        self.m = _zeros(shapes)
        self.v = _zeros(shapes)

    def _apply(self, i, w, g):
        lr, b1, b2 = self.p["learning_rate"], self.p["beta1"], self.p["beta2"]
        wd = self.p["weight_decay"]
        if wd:
            w *= 1 - lr * wd
        self.m[i] = b1 * self.m[i] + (1 - b1) * g
        self.v[i] = b2 * self.v[i] + (1 - b2) * g * g
        m_hat = self.m[i] / (1 - b1 ** self.t)
        v_hat = self.v[i] / (1 - b2 ** self.t)
        w -= lr * m_hat / (np.sqrt(v_hat) + EPS)


class Adamax(_SolverState):
    """Adam's infinity-norm variant: v becomes a running max."""

    def __init__(self, params, shapes):
        super().__init__(params, shapes)
        self.m = _zeros(shapes)
        self.u = _zeros(shapes)

    def _apply(self, i, w, g):
        lr, b1, b2 = self.p["learning_rate"], self.p["beta1"], self.p["beta2"]
        g = self._decayed(w, g)
        self.m[i] = b1 * self.m[i] + (1 - b1) * g
        self.u[i] = np.maximum(b2 * self.u[i], np.abs(g))
        w -= (lr / (1 - b1 ** self.t)) * self.m[i] / (self.u[i] + EPS)


class ASGD(_SolverState):
    """SGD with a decaying step and Polyak-averaged iterates. The averages
    are kept in `ax` for inspection; updates train the current iterate."""

    ALPHA = 0.75

    def __init__(self, params, shapes):
        super().__init__(params, shapes)
        self.ax = _zeros(shapes)

    def _apply(self, i, w, g):
        lr, lam = self.p["learning_rate"], self.p["lambda"]
        g = self._decayed(w, g)
        # the step-size schedule lags one step: the first update uses lr
        eta = lr / (1 + lam * lr * (self.t - 1)) ** self.ALPHA
        w *= 1 - lam * eta
        w -= eta * g
        self.ax[i] += (w - self.ax[i]) / self.t


class NAdam(_SolverState):
    """Adam with Nesterov momentum; "lambda" is the momentum-decay rate."""

    def __init__(self, params, shapes):
        super().__init__(params, shapes)
        self.m = _zeros(shapes)
        self.v = _zeros(shapes)
        self.mu_prod = 1.0

    def step(self, params, grads):
        _check_grads(grads)
        self.t += 1
        b1, psi = self.p["beta1"], self.p["lambda"]
        mu_t = b1 * (1 - 0.5 * 0.96 ** (self.t * psi))
        mu_next = b1 * (1 - 0.5 * 0.96 ** ((self.t + 1) * psi))
        self.mu_prod *= mu_t
        for i, (w, g) in enumerate(zip(params, grads)):
            self._apply(i, w, np.asarray(g, dtype=float), mu_t, mu_next)
        return params

    def _apply(self, i, w, g, mu_t, mu_next):
        lr, b1, b2 = self.p["learning_rate"], self.p["beta1"], self.p["beta2"]
        g = self._decayed(w, g)
        self.m[i] = b1 * self.m[i] + (1 - b1) * g
        self.v[i] = b2 * self.v[i] + (1 - b2) * g * g
        m_hat = (mu_next * self.m[i] / (1 - self.mu_prod * mu_next)
                 + (1 - mu_t) * g / (1 - self.mu_prod))
        v_hat = self.v[i] / (1 - b2 ** self.t)
        w -= lr * m_hat / (np.sqrt(v_hat) + EPS)


class RAdam(_SolverState):
    """Rectified Adam: falls back to un-adapted steps while the variance
    estimate is untrustworthy (rho_t <= 5, as in the reference code)."""

    def __init__(self, params, shapes):
        super().__init__(params, shapes)
        self.m = _zeros(shapes)
        self.v = _zeros(shapes)

    def _apply(self, i, w, g):
        lr, b1, b2 = self.p["learning_rate"], self.p["beta1"], self.p["beta2"]
        g = self._decayed(w, g)
        self.m[i] = b1 * self.m[i] + (1 - b1) * g
        self.v[i] = b2 * self.v[i] + (1 - b2) * g * g
        m_hat = self.m[i] / (1 - b1 ** self.t)
        rho_inf = 2 / (1 - b2) - 1
        rho_t = rho_inf - 2 * self.t * b2 ** self.t / (1 - b2 ** self.t)
        if rho_t > 5:
            v_hat = self.v[i] / (1 - b2 ** self.t)
            r = np.sqrt((rho_t - 4) * (rho_t - 2) * rho_inf
                        / ((rho_inf - 4) * (rho_inf - 2) * rho_t))
            w -= lr * r * m_hat / (np.sqrt(v_hat) + EPS)
        else:
            w -= lr * m_hat


class RMSprop(_SolverState):
    """"rho" acts as the squared-gradient smoothing constant here."""

    def __init__(self, params, shapes):
        super().__init__(params, shapes)
        self.sq_avg = _zeros(shapes)
        self.buf = _zeros(shapes)

    def _apply(self, i, w, g):
        lr, rho, mom = (self.p["learning_rate"], self.p["rho"],
                        self.p["momentum"])
        g = self._decayed(w, g)
        self.sq_avg[i] = rho * self.sq_avg[i] + (1 - rho) * g * g
        scaled = g / (np.sqrt(self.sq_avg[i]) + EPS)
        if mom:
            self.buf[i] = mom * self.buf[i] + scaled
            w -= lr * self.buf[i]
        else:
            w -= lr * scaled


class Rprop(_SolverState):
    """Sign-based updates with per-weight step sizes; the learning-rate
    gene sets the initial step."""

    ETA_PLUS = 1.2
    ETA_MINUS = 0.5
    STEP_MIN = 1e-6
    STEP_MAX = 50.0

    def __init__(self, params, shapes):
        super().__init__(params, shapes)
        self.step_size = [np.full(s, params["learning_rate"]) for s in shapes]
        self.prev_grad = _zeros(shapes)

    def _apply(self, i, w, g):
        sign = self.prev_grad[i] * g
        grew = sign > 0
        shrank = sign < 0
        self.step_size[i][grew] = np.minimum(
            self.step_size[i][grew] * self.ETA_PLUS, self.STEP_MAX)
        self.step_size[i][shrank] = np.maximum(
            self.step_size[i][shrank] * self.ETA_MINUS, self.STEP_MIN)
        g = np.where(shrank, 0.0, g)
        w -= np.sign(g) * self.step_size[i]
        self.prev_grad[i] = g


class SGD(_SolverState):
    def __init__(self, params, shapes):
        super().__init__(params, shapes)
        self.buf = _zeros(shapes)

    def _apply(self, i, w, g):
        lr, mom = self.p["learning_rate"], self.p["momentum"]
        g = self._decayed(w, g)
        if mom:
            self.buf[i] = mom * self.buf[i] + g
            w -= lr * self.buf[i]
        else:
            w -= lr * g


_SOLVER_CLASSES = {
    1: Adam,
    2: Adadelta,
    3: AdamW,
    4: Adamax,
    5: ASGD,
    6: NAdam,
    7: RAdam,
    8: RMSprop,
    9: Rprop,
    10: SGD,
}
