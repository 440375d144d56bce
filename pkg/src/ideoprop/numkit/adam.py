from __future__ import annotations

import numpy as np

from .tape import ShapeError


class Adam:
    """Adam with bias correction over a fixed list of parameter arrays."""

    def __init__(self, shapes, lr: float = 0.01, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.step_count = 0
        self.m = [np.zeros(s) for s in shapes]
        self.v = [np.zeros(s) for s in shapes]

    def step(self, params: list[np.ndarray], grads: list[np.ndarray]) -> list[np.ndarray]:
        if len(params) != len(self.m) or len(grads) != len(self.m):
            raise ShapeError("parameter/gradient count does not match optimizer state")
        self.step_count += 1
        t = self.step_count
        c1 = 1.0 - self.beta1 ** t
        c2 = 1.0 - self.beta2 ** t
        out = []
        for k, (p, g) in enumerate(zip(params, grads)):
            if p.shape != self.m[k].shape or g.shape != p.shape:
                raise ShapeError(f"shape mismatch at parameter {k}: {p.shape} vs grad {g.shape}")
            self.m[k] = self.beta1 * self.m[k] + (1.0 - self.beta1) * g
            self.v[k] = self.beta2 * self.v[k] + (1.0 - self.beta2) * g * g
            mhat = self.m[k] / c1
            vhat = self.v[k] / c2
            out.append(p - self.lr * mhat / (np.sqrt(vhat) + self.eps))
        return out
