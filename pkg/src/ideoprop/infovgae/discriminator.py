from __future__ import annotations

import numpy as np

from ..numkit import Adam, Rng, Tape, Var
from ..numkit import tape as ad
from .model import glorot


def permute_dims(z: np.ndarray, rng: Rng) -> np.ndarray:
    """Shuffle every latent column independently across rows."""
    out = np.empty_like(z)
    for t in range(z.shape[1]):
        out[:, t] = z[rng.permutation(z.shape[0]), t]
    return out


class Discriminator:
    """Two-layer perceptron scoring rows of Z; the output is the logit of Phi."""

    def __init__(self, n_latent: int, rng: Rng, hidden: int = 64, lr: float = 0.01):
        self.params = [
            glorot(rng, n_latent, hidden),
            np.zeros((1, hidden)),
            glorot(rng, hidden, 1),
            np.zeros((1, 1)),
        ]
        self.opt = Adam([p.shape for p in self.params], lr=lr)

    def forward(self, z, params):
        w1, b1, w2, b2 = params
        return ad.matmul(ad.relu(ad.matmul(z, w1) + b1), w2) + b2

    def logits(self, z):
        if isinstance(z, Var):
            return self.forward(z, self.params)
        tape = Tape()
        return self.forward(tape.var(z), self.params).value

    def loss(self, z_true: np.ndarray, z_perm: np.ndarray, params=None):
        """BCE for label 1 on true rows and 0 on permuted rows; returns ``(tape_out, leaves)``."""
        tape = Tape()
        leaves = [tape.var(p) for p in (self.params if params is None else params)]
        batch = np.vstack([z_true, z_perm])
        target = np.concatenate([np.ones(len(z_true)), np.zeros(len(z_perm))])[:, None]
        out = ad.mean(ad.bce_logits(self.forward(batch, leaves), target))
        return out, leaves

    def step(self, z: np.ndarray, rng: Rng) -> float:
        z = np.asarray(z, dtype=np.float64)
        out, leaves = self.loss(z, permute_dims(z, rng))
        grads = out.tape.gradient(out, leaves)
        self.params = self.opt.step(self.params, grads)
        return float(out.value)


def tc_loss(z, disc: Discriminator):
    """Mean discriminator logit, i.e. the density-ratio estimate log Phi - log(1 - Phi)."""
    if isinstance(z, Var):
        return ad.mean(disc.logits(z))
    return float(np.mean(disc.logits(z)))


def disc_step(z, disc: Discriminator, rng: Rng) -> float:
    return disc.step(z, rng)
