"""Battery-trace ingestion, energy-rate labeling, and mask handling.

The pipeline turns a raw per-state telemetry CSV into a labeled feature
matrix: charging states are dropped, consecutive discharging states are
paired, each pair's battery drop per minute becomes its class label, and
the features of the earlier state describe the instance. Controlled
missingness is injected afterwards as an explicit binary mask.
"""

import csv
import io
from dataclasses import dataclass, field

import numpy as np

CLASS_NAMES = ("safe", "warning", "critical")
SAFE_BELOW = 0.5
CRITICAL_ABOVE = 1.5

CHARGING = "charging"
DISCHARGING = "discharging"


class SchemaError(ValueError):
    """A required column is absent or the schema is malformed."""


class RowParseError(ValueError):
    """A cell could not be parsed; message carries the line number."""


class DegenerateIntervalError(ValueError):
    """Two states share a timestamp, so no rate can be computed."""


class FilteredStateError(ValueError):
    """A charging state reached a computation that assumes discharging."""


@dataclass(frozen=True)
class StateRow:
    timestamp: float
    battery_level: float
    battery_state: str
    features: dict


@dataclass
class LabeledDataset:
    """Complete feature matrix plus integer labels (0=safe, 1=warning,
    2=critical)."""

    X: np.ndarray
    y: np.ndarray
    feature_names: list

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]


@dataclass
class MaskedDataset:
    """Feature matrix with masked entries zeroed and the mask that says
    which entries were observed (1) versus missing (0)."""

    X: np.ndarray
    M: np.ndarray
    y: np.ndarray
    feature_names: list = field(default_factory=list)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]


@dataclass(frozen=True)
class DataSchema:
    """Declares the feature columns of a raw trace and how to encode them.

    features maps column name -> "numeric", {"ordinal": [...]} or
    {"onehot": [...]}; settings lists the columns that must stay unchanged
    between two paired states.
    """

    features: dict
    settings: tuple = ()

    def __post_init__(self):
        for name, kind in self.features.items():
            if kind == "numeric":
                continue
            if isinstance(kind, dict) and set(kind) in ({"ordinal"},
                                                        {"onehot"}):
                continue
            raise SchemaError(f"feature {name!r} has unknown kind {kind!r}")
        for name in self.settings:
            if name not in self.features:
                raise SchemaError(f"settings column {name!r} not a feature")

    @classmethod
    def from_dict(cls, d):
        return cls(features=dict(d["features"]),
                   settings=tuple(d.get("settings", ())))

    def encoded_names(self):
        names = []
        for name, kind in self.features.items():
            if isinstance(kind, dict) and "onehot" in kind:
                names.extend(f"{name}={cat}" for cat in kind["onehot"])
            else:
                names.append(name)
        return names

    def encode_row(self, features):
        out = []
        for name, kind in self.features.items():
            value = features[name]
            if kind == "numeric":
                out.append(float(value))
            elif "ordinal" in kind:
                cats = kind["ordinal"]
                if value not in cats:
                    raise ValueError(f"{name}: unknown category {value!r}")
                out.append(float(cats.index(value)))
            else:
                cats = kind["onehot"]
                if value not in cats:
                    raise ValueError(f"{name}: unknown category {value!r}")
                out.extend(1.0 if value == cat else 0.0 for cat in cats)
        return out


def compute_ecpm(state1, state2):
    """Battery percentage consumed per minute between consecutive
    discharging states."""
    if state1.battery_state != DISCHARGING \
            or state2.battery_state != DISCHARGING:
        raise FilteredStateError("both states must be discharging")
    dt = state2.timestamp - state1.timestamp
    if dt == 0:
        raise DegenerateIntervalError("states share a timestamp")
    if dt < 0:
        raise ValueError("state2 must come after state1")
    return (state1.battery_level - state2.battery_level) / dt * 60.0


def label_ecpm(ecpm):
    """Class index for an energy rate: below 0.5 is safe, above 1.5 is
    critical, anything between is warning."""
    if not np.isfinite(ecpm):
        raise ValueError(f"non-finite ecpm {ecpm}")
    if ecpm < SAFE_BELOW:
        return 0
    if ecpm > CRITICAL_ABOVE:
        return 2
    return 1


def _parse_state_rows(stream, schema):
    reader = csv.DictReader(stream)
    header = reader.fieldnames or []
    required = ["timestamp", "battery_state", "battery_level"]
    for col in required + list(schema.features):
        if col not in header:
            raise SchemaError(f"missing column {col!r}")
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        try:
            state = rec["battery_state"].strip()
            if state not in (CHARGING, DISCHARGING):
                raise ValueError(f"unknown battery_state {state!r}")
            level = float(rec["battery_level"])
            if not 0.0 <= level <= 100.0:
                raise ValueError(f"battery_level {level} outside [0, 100]")
            rows.append(StateRow(
                timestamp=float(rec["timestamp"]),
                battery_level=level,
                battery_state=state,
                features={name: rec[name] for name in schema.features},
            ))
        except ValueError as exc:
            raise RowParseError(f"line {lineno}: {exc}") from exc
    return rows


def ingest(stream, schema):
    """Build a LabeledDataset from a raw trace CSV.

    Pairing walks original-stream-consecutive rows: both must be
    discharging, neither excluded by the charging-gap rule (a charging
    state between two discharging ones knocks out itself and the next
    row), the settings columns must match, and time must advance.
    """
    if isinstance(stream, (str, bytes)):
        stream = io.StringIO(stream)
    rows = _parse_state_rows(stream, schema)

    excluded = [r.battery_state == CHARGING for r in rows]
    for j in range(1, len(rows) - 1):
        if (rows[j].battery_state == CHARGING
                and rows[j - 1].battery_state == DISCHARGING
                and rows[j + 1].battery_state == DISCHARGING):
            excluded[j + 1] = True

    X_rows, labels = [], []
    for j in range(len(rows) - 1):
        a, b = rows[j], rows[j + 1]
        if excluded[j] or excluded[j + 1]:
            continue
        if a.battery_state != DISCHARGING or b.battery_state != DISCHARGING:
            continue
        if b.timestamp <= a.timestamp:
            continue
        if any(a.features[s] != b.features[s] for s in schema.settings):
            continue
        try:
            encoded = schema.encode_row(a.features)
        except ValueError as exc:
            raise RowParseError(f"line {j + 2}: {exc}") from exc
        X_rows.append(encoded)
        labels.append(label_ecpm(compute_ecpm(a, b)))

    names = schema.encoded_names()
    if not X_rows:
        return LabeledDataset(X=np.zeros((0, len(names))),
                              y=np.zeros(0, dtype=int),
                              feature_names=names)
    return LabeledDataset(X=np.array(X_rows, dtype=float),
                          y=np.array(labels, dtype=int),
                          feature_names=names)


def inject_missing(ds, rate, seed):
    """Zero out exactly floor(rate * n * p) uniformly chosen entries.

    The chosen positions get mask 0 and value 0; everything else is kept.
    The same seed always removes the same positions.
    """
    if not 0.0 <= rate <= 0.95:
        raise ValueError(f"missing rate {rate} outside [0, 0.95]")
    n, p = ds.X.shape
    total = n * p
    k = int(np.floor(rate * total))
    mask = np.ones(total)
    if k:
        rng = np.random.default_rng(seed)
        hit = rng.choice(total, size=k, replace=False)
        mask[hit] = 0.0
    M = mask.reshape(n, p)
    return MaskedDataset(X=ds.X * M, M=M, y=ds.y.copy(),
                         feature_names=list(ds.feature_names))


def as_masked(ds):
    """Wrap a complete dataset with an all-ones mask."""
    return MaskedDataset(X=ds.X.copy(), M=np.ones_like(ds.X), y=ds.y.copy(),
                         feature_names=list(ds.feature_names))


def synthesize(n, p, n_classes, separation, seed):
    """Desk-scale stand-in data: balanced Gaussian blobs whose class means
    sit `separation` away from the origin along random directions."""
    if n < 1 or p < 1 or n_classes < 1:
        raise ValueError("n, p and n_classes must all be >= 1")
    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((n_classes, p))
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    means = separation * directions / norms

    counts = [n // n_classes + (1 if i < n % n_classes else 0)
              for i in range(n_classes)]
    X = np.vstack([
        means[c] + rng.standard_normal((counts[c], p))
        for c in range(n_classes)
    ])
    y = np.concatenate([np.full(counts[c], c, dtype=int)
                        for c in range(n_classes)])
    order = rng.permutation(n)
    names = [f"f{i}" for i in range(p)]
    return LabeledDataset(X=X[order], y=y[order], feature_names=names)


def write_dataset_csv(ds, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(ds.feature_names) + ["label"])
        for xi, yi in zip(ds.X, ds.y):
            writer.writerow([repr(float(v)) for v in xi]
                            + [CLASS_NAMES[yi]])


def read_dataset_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if not header or header[-1] != "label":
            raise SchemaError("expected a trailing 'label' column")
        names = header[:-1]
        X_rows, labels = [], []
        for lineno, rec in enumerate(reader, start=2):
            try:
                X_rows.append([float(v) for v in rec[:-1]])
                labels.append(CLASS_NAMES.index(rec[-1]))
            except ValueError as exc:
                raise RowParseError(f"line {lineno}: {exc}") from exc
    X = np.array(X_rows, dtype=float) if X_rows \
        else np.zeros((0, len(names)))
    return LabeledDataset(X=X, y=np.array(labels, dtype=int),
                          feature_names=names)


def write_mask_csv(mds, path):
    np.savetxt(path, mds.M, fmt="%d", delimiter=",")


def read_masked_csv(dataset_path, mask_path):
    ds = read_dataset_csv(dataset_path)
    M = np.loadtxt(mask_path, delimiter=",", dtype=float, ndmin=2)
    if M.shape != ds.X.shape:
        raise SchemaError(
            f"mask shape {M.shape} does not match data {ds.X.shape}")
    return MaskedDataset(X=ds.X * M, M=M, y=ds.y,
                         feature_names=ds.feature_names)
