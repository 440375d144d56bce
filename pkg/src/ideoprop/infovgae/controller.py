from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass
class PiController:
    """Proportional-integral feedback that sets the KL weight from the observed KL.

    The proportional term is ``kp / (1 + exp(e))`` with ``e = kl_target - kl``,
    so it saturates at ``kp`` when the KL overshoots and vanishes when it
    undershoots. The integral only accumulates while the previous output was
    strictly inside the bounds, or when accumulating would pull a saturated
    output back inside.
    """

    kp: float = 0.01
    ki: float = 0.001
    kl_target: float = 50.0
    beta_min: float = 0.0
    beta_max: float = 1.0
    integral: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.beta_min > self.beta_max:
            raise ValueError("beta_min must not exceed beta_max")
        self.beta = min(max(self.beta, self.beta_min), self.beta_max)

    def proportional(self, error: float) -> float:
        # kp / (1 + e^x) without overflow
        if error > 0:
            z = math.exp(-error)
            return self.kp * z / (1.0 + z)
        return self.kp / (1.0 + math.exp(error))

    def update(self, observed_kl: float) -> float:
        if observed_kl < 0:
            raise ValueError(f"observed KL must be non-negative, got {observed_kl}")
        e = self.kl_target - observed_kl
        p = self.proportional(e)
        inside = self.beta_min < self.beta < self.beta_max
        recovering = (self.beta <= self.beta_min and e < 0) or (self.beta >= self.beta_max and e > 0)
        if inside or recovering:
            self.integral -= self.ki * e
        self.beta = min(max(p + self.integral + self.beta_min, self.beta_min), self.beta_max)
        return self.beta


def pi_update(pc: PiController, observed_kl: float) -> float:
    return pc.update(observed_kl)
