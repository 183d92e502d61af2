"""The concealing strategy in action.

Masked inputs are zeroed by an element-wise product before the first
hidden layer, so a missing feature contributes nothing to any first-layer
activation. The demo shows that masked entries are literally
unobservable: change them however you like, the class scores do not move
by a single bit. An all-ones mask reproduces the dense network exactly.
"""

import numpy as np

from evomlp.network import forward, init_network, loss_and_gradients

rng = np.random.default_rng(0)

net = init_network([16, 8], input_dim=10, seed=42)
x = rng.normal(size=10)
mask = np.array([1, 1, 0, 1, 0, 0, 1, 1, 0, 1], dtype=float)

scores = forward(net, x, mask)
print("scores with mask      :", np.round(scores, 6))

vandalized = x.copy()
vandalized[mask == 0] = 1e9  # garbage in the missing slots
print("scores after vandalism:", np.round(forward(net, vandalized, mask),
                                          6))
assert np.array_equal(forward(net, x, mask),
                      forward(net, vandalized, mask))
print("masked entries are unobservable (bit-identical scores)\n")

dense = forward(net, x, None)
onesmask = forward(net, x, np.ones(10))
assert np.array_equal(dense, onesmask)
print("all-ones mask == dense evaluation (bit-identical)\n")

# gradients are exact: compare one entry against a central difference
X = rng.normal(size=(8, 10))
M = (rng.random((8, 10)) > 0.3).astype(float)
y = rng.integers(0, 3, size=8)
loss, grads = loss_and_gradients(net, X, M, y)
w = net.weights[0]
step = 1e-6
w[3, 5] += step
up, _ = loss_and_gradients(net, X, M, y)
w[3, 5] -= 2 * step
down, _ = loss_and_gradients(net, X, M, y)
w[3, 5] += step
print(f"analytic dL/dW1[3,5] = {grads[0][3, 5]:+.8f}")
print(f"numeric  dL/dW1[3,5] = {(up - down) / (2 * step):+.8f}")
