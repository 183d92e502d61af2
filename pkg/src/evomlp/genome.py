"""Two-segment candidate-solution encoding for network search.

A candidate is a fixed block of 8 training hyperparameters followed by a
variable-length block of neuron counts, one gene per hidden layer. All genes
are real-valued so any continuous optimizer can move them; integer genes
(solver choice, neuron counts) are rounded and clamped only at decode time.
"""

from dataclasses import dataclass

import numpy as np

from . import solvers

# Field order defines the vector layout of the fixed segment.
HYPER_FIELDS = (
    "learning_rate",
    "weight_decay",
    "rho",
    "beta1",
    "beta2",
    "lambda",
    "momentum",
    "solver",
)

HYPER_BOUNDS = {
    "learning_rate": (0.0, 1.0),
    "weight_decay": (0.0, 0.2),
    "rho": (0.0, 1.0),
    "beta1": (0.8, 1.0),
    "beta2": (0.8, 1.0),
    "lambda": (0.0, 1.0),
    "momentum": (0.0, 1.0),
    "solver": (1.0, 10.0),
}


class CapacityError(ValueError):
    """Raised when a genome already has the maximum number of layers."""


def round_half_away(x):
    """Round to nearest integer, ties away from zero (np.round would
    banker's-round 2.5 to 2)."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


@dataclass(frozen=True)
class SearchSpace:
    """Bounds for every gene plus the layer budget."""

    neuron_min: int = 1
    neuron_max: int = 400
    max_layers: int = 8
    solver_count: int = 10

    def __post_init__(self):
        if self.neuron_min < 1:
            raise ValueError("neuron_min must be >= 1")
        if self.max_layers < 1:
            raise ValueError("max_layers must be >= 1")

    def dimension(self, n_layers):
        return len(HYPER_FIELDS) + n_layers

    def vector_bounds(self, n_layers):
        """Lower/upper bound arrays for an n_layers genome vector."""
        lo = [HYPER_BOUNDS[f][0] for f in HYPER_FIELDS]
        hi = [HYPER_BOUNDS[f][1] for f in HYPER_FIELDS]
        lo += [float(self.neuron_min)] * n_layers
        hi += [float(self.neuron_max)] * n_layers
        return np.array(lo), np.array(hi)


@dataclass(frozen=True)
class HyperparamVector:
    """The fixed 8-gene segment. `lam` carries the "lambda" gene (keyword
    clash) and `solver_gene` the real-valued solver selector."""

    learning_rate: float
    weight_decay: float
    rho: float
    beta1: float
    beta2: float
    lam: float
    momentum: float
    solver_gene: float

    def as_dict(self):
        return {
            "learning_rate": self.learning_rate,
            "weight_decay": self.weight_decay,
            "rho": self.rho,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "lambda": self.lam,
            "momentum": self.momentum,
            "solver": self.solver_gene,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            learning_rate=d["learning_rate"],
            weight_decay=d["weight_decay"],
            rho=d["rho"],
            beta1=d["beta1"],
            beta2=d["beta2"],
            lam=d["lambda"],
            momentum=d["momentum"],
            solver_gene=d["solver"],
        )

    def validate(self):
        for field, value in zip(HYPER_FIELDS, self.values()):
            lo, hi = HYPER_BOUNDS[field]
            if not lo <= value <= hi:
                raise ValueError(f"{field}={value} outside [{lo}, {hi}]")

    def values(self):
        return (
            self.learning_rate,
            self.weight_decay,
            self.rho,
            self.beta1,
            self.beta2,
            self.lam,
            self.momentum,
            self.solver_gene,
        )


@dataclass(frozen=True)
class Genome:
    """hyper segment + one real neuron gene per hidden layer."""

    hyper: HyperparamVector
    neurons: tuple

    @property
    def n_layers(self):
        return len(self.neurons)

    def to_vector(self):
        return np.array(self.hyper.values() + self.neurons, dtype=float)

    @classmethod
    def from_vector(cls, vec):
        vec = np.asarray(vec, dtype=float)
        if vec.size < len(HYPER_FIELDS) + 1:
            raise ValueError("vector too short for a 1-layer genome")
        hyper = HyperparamVector(
            *(float(v) for v in vec[: len(HYPER_FIELDS)]))
        return cls(hyper=hyper,
                   neurons=tuple(float(v) for v in vec[len(HYPER_FIELDS):]))

    def to_dict(self):
        d = self.hyper.as_dict()
        d["neurons"] = list(self.neurons)
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            hyper=HyperparamVector.from_dict(d),
            neurons=tuple(d["neurons"]),
        )


@dataclass(frozen=True)
class NetworkSpec:
    """Decoded, trainable description: integer layer sizes, the chosen
    solver, and only the hyperparameters that solver consumes."""

    hidden_layer_sizes: tuple
    solver_id: int
    active_params: dict

    @property
    def solver_name(self):
        return solvers.SOLVER_NAMES[self.solver_id]


def random_genome(space, n_layers, rng):
    """Draw a uniform genome with `n_layers` neuron genes.

    Raises ValueError when n_layers is outside [1, space.max_layers].
    """
    if not 1 <= n_layers <= space.max_layers:
        raise ValueError(
            f"n_layers={n_layers} outside [1, {space.max_layers}]")
    lo, hi = space.vector_bounds(n_layers)
    return Genome.from_vector(rng.uniform(lo, hi))


def clip_to_space(vec, space, n_layers):
    """Clamp a raw vector into the search space bounds."""
    lo, hi = space.vector_bounds(n_layers)
    return np.clip(vec, lo, hi)


def selective_exclusion(solver_id, hyper):
    """Keep only the hyperparameters the chosen solver consumes.

    The remaining genes stay in the genome (the optimizer keeps moving
    them) but never reach training.
    """
    consumed = solvers.consumed_parameters(solver_id)
    full = hyper.as_dict()
    full.pop("solver")
    return {name: full[name] for name in sorted(consumed)}


def decode(genome, space):
    """Realize a genome as a NetworkSpec (pure, total on valid genomes)."""
    solver_id = int(np.clip(round_half_away(genome.hyper.solver_gene),
                            1, space.solver_count))
    sizes = round_half_away(np.array(genome.neurons))
    sizes = np.clip(sizes, space.neuron_min, space.neuron_max)
    return NetworkSpec(
        hidden_layer_sizes=tuple(int(s) for s in sizes),
        solver_id=solver_id,
        active_params=selective_exclusion(solver_id, genome.hyper),
    )


def grow(genome, space, rng):
    """Append one uniform-random neuron gene, keeping everything else.

    Raises CapacityError once the genome already has max_layers layers.
    """
    if genome.n_layers >= space.max_layers:
        raise CapacityError(
            f"genome already has {genome.n_layers} layers "
            f"(max {space.max_layers})")
    new_gene = float(rng.uniform(space.neuron_min, space.neuron_max))
    return Genome(hyper=genome.hyper, neurons=genome.neurons + (new_gene,))


def mid_range_hyper():
    """Hyperparameter vector at the midpoint of every bound interval."""
    mids = [0.5 * (lo + hi) for lo, hi in
            (HYPER_BOUNDS[f] for f in HYPER_FIELDS)]
    return HyperparamVector(*mids)
