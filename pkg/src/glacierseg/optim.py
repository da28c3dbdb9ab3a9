"""Adam over named parameter slots (in-place updates)."""

import numpy as np


class Adam:
    """Standard bias-corrected Adam.

    ``slots`` is a list of (name, value, grad) triples; values are updated in
    place so the model sees new weights without any rebinding.
    """

    def __init__(self, slots, learning_rate=1e-4, beta1=0.9, beta2=0.999, eps=1e-8):
        self.slots = list(slots)
        self.lr = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self._m = {name: np.zeros_like(value) for name, value, _ in self.slots}
        self._v = {name: np.zeros_like(value) for name, value, _ in self.slots}

    def step(self):
        self.t += 1
        bc1 = 1.0 - self.beta1 ** self.t
        bc2 = 1.0 - self.beta2 ** self.t
        for name, value, grad in self.slots:
            m = self._m[name]
            v = self._v[name]
            m += (1.0 - self.beta1) * (grad - m)
            v += (1.0 - self.beta2) * (grad * grad - v)
            value -= self.lr * (m / bc1) / (np.sqrt(v / bc2) + self.eps)
