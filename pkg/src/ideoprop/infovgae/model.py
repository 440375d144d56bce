"""Encoder, rectified latent sampling, decoder and the loss terms.

Every function accepts either tape variables (inside training, so gradients
flow) or plain arrays, in which case it returns plain values.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..numkit import Rng, Tape, Var
from ..numkit import tape as ad

LOG_SIGMA_MIN, LOG_SIGMA_MAX = -6.0, 6.0


class DegenerateGraphError(ValueError):
    pass


def _lift(*xs):
    """Wrap plain arrays as leaves of a throwaway tape; report whether we did."""
    if any(isinstance(x, Var) for x in xs):
        return xs, False
    tape = Tape()
    return tuple(tape.var(x) for x in xs), True


def _out(v: Var, lifted: bool):
    if not lifted:
        return v
    return float(v.value) if v.value.ndim == 0 else v.value


def glorot(rng: Rng, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform((fan_in, fan_out), -limit, limit)


@dataclass
class EncoderParams:
    w_hidden: np.ndarray  # N x d1, shared GCN layer
    w_mu: np.ndarray      # d1 x T
    w_sigma: np.ndarray   # d1 x T

    @classmethod
    def init(cls, n_features: int, hidden: int, latent: int, rng: Rng) -> "EncoderParams":
        return cls(glorot(rng, n_features, hidden), glorot(rng, hidden, latent),
                   glorot(rng, hidden, latent))

    def as_list(self) -> list[np.ndarray]:
        return [self.w_hidden, self.w_mu, self.w_sigma]


def encode(inputs, params: EncoderParams):
    """Two-layer GCN over the normalized adjacency; returns ``(mu, log_sigma)``."""
    (w_hidden, w_mu, w_sigma), lifted = _lift(params.w_hidden, params.w_mu, params.w_sigma)
    a = inputs.norm_adj
    x = inputs.features
    if x.shape == a.shape and np.array_equal(x, np.eye(len(x))):
        xw = w_hidden  # one-hot features: the first layer is a lookup table
    else:
        xw = ad.matmul(x, w_hidden)
    h = ad.relu(ad.matmul(a, xw))
    ah = ad.matmul(a, h)
    mu = ad.matmul(ah, w_mu)
    log_sigma = ad.clamp(ad.matmul(ah, w_sigma), LOG_SIGMA_MIN, LOG_SIGMA_MAX)
    return _out(mu, lifted), _out(log_sigma, lifted)


def reparameterize(mu, log_sigma, noise):
    """Rectified Gaussian sample ``max(0, mu + sigma * eps)``.

    ``noise`` is either an :class:`Rng` or a pre-drawn standard normal array.
    """
    (mu, log_sigma), lifted = _lift(mu, log_sigma)
    eps = noise.normal(mu.shape) if isinstance(noise, Rng) else np.asarray(noise)
    z = ad.relu(mu + ad.exp(log_sigma) * eps)
    return _out(z, lifted)


def logits(z):
    (z,), lifted = _lift(z)
    return _out(ad.matmul(z, z.T), lifted)


def decode(z) -> np.ndarray:
    z = z.value if isinstance(z, Var) else np.asarray(z, dtype=np.float64)
    return ad.sigmoid(z @ z.T)


def recon_weights(adj: np.ndarray) -> np.ndarray:
    n1 = float(adj.sum())
    if n1 == 0:
        raise DegenerateGraphError("adjacency has no non-zero entries")
    pos_weight = (adj.size - n1) / n1
    return np.where(adj > 0, pos_weight, 1.0)


def recon_loss(z, adj, weights=None):
    """Class-balanced BCE between inner-product logits and the adjacency, averaged."""
    (z,), lifted = _lift(z)
    if weights is None:
        weights = recon_weights(adj)
    return _out(ad.mean(ad.bce_logits(ad.matmul(z, z.T), adj, weights)), lifted)


def kl_term(mu, log_sigma):
    """KL of N(mu, sigma^2) from N(0, 1), summed over every node and axis."""
    (mu, log_sigma), lifted = _lift(mu, log_sigma)
    var = ad.exp(log_sigma * 2.0)
    kl = ad.total(ad.square(mu) + var - 1.0 - log_sigma * 2.0) * 0.5
    return _out(kl, lifted)


def anchor_penalty(z, anchors, n_latent=None):
    """Sum of squared off-axis coordinates over anchored rows.

    ``anchors`` is a sequence of ``(row_index, axis)``.
    """
    (z,), lifted = _lift(z)
    n, t = z.shape
    mask = np.zeros((n, t))
    for row, axis in anchors:
        if not 0 <= row < n:
            raise IndexError(f"anchor row {row} outside [0, {n})")
        if not 0 <= axis < t:
            raise IndexError(f"anchor axis {axis} outside [0, {t})")
        mask[row, :] += 1.0
        mask[row, axis] -= 1.0
    return _out(ad.total(ad.square(z) * mask), lifted)
