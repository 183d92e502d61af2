"""From a raw battery trace to a labeled, masked dataset.

A telemetry stream is a sequence of device states: timestamp, battery
level, charging/discharging flag, and whatever settings the device
exposes. Consecutive discharging states give an energy rate in percent
per minute, and the rate buckets each instance into safe / warning /
critical. Missing values are then injected explicitly, with a binary
mask recording what was removed.
"""

import io

import numpy as np

from evomlp.data import (DataSchema, ingest, inject_missing, label_ecpm,
                         CLASS_NAMES)

TRACE = """timestamp,battery_state,battery_level,cpu,wifi
0,discharging,90.0,0.31,on
60,discharging,89.0,0.40,on
120,discharging,88.9,0.35,on
180,charging,89.5,0.20,on
240,discharging,89.4,0.22,on
300,discharging,87.2,0.80,on
360,discharging,87.1,0.25,on
420,discharging,87.0,0.21,off
480,discharging,86.9,0.19,off
"""

schema = DataSchema(
    features={"cpu": "numeric", "wifi": {"ordinal": ["off", "on"]}},
    settings=("wifi",),
)

ds = ingest(io.StringIO(TRACE), schema)
print(f"ingested {ds.n} labeled instances from the trace")
for x, y in zip(ds.X, ds.y):
    print(f"  features={x}  label={CLASS_NAMES[y]}")

# The charging row at t=180 is excluded together with the row right
# after it, so pairing resumes at t=300. The wifi flip at t=420 drops
# that pair too (settings must hold still between paired states).

print("\nthreshold sanity:",
      CLASS_NAMES[label_ecpm(0.3)], CLASS_NAMES[label_ecpm(1.0)],
      CLASS_NAMES[label_ecpm(2.0)])

masked = inject_missing(ds, rate=0.4, seed=11)
removed = int(masked.M.size - masked.M.sum())
print(f"\ninjected missingness: {removed} of {masked.M.size} entries "
      f"zeroed (exactly floor(0.4 * n * p))")
print("mask:")
print(masked.M.astype(int))
assert np.all(masked.X * (1 - masked.M) == 0)
