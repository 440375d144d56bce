from __future__ import annotations

import dataclasses
import json
import logging
from dataclasses import dataclass, field, fields

import numpy as np

from ..numkit import Adam, Rng, Tape
from .controller import PiController
from .discriminator import Discriminator, tc_loss
from .model import (EncoderParams, anchor_penalty, encode, kl_term, recon_loss,
                    recon_weights, reparameterize)

log = logging.getLogger(__name__)

COMPONENTS = ("recon", "kl", "tc", "anchor", "beta", "total", "disc")


class TrainingError(RuntimeError):
    pass


@dataclass
class TrainConfig:
    T: int = 2
    d1: int = 32
    epochs: int = 1000
    lr: float = 0.002
    lam: float = 0.5
    gamma_sup: float = 1.0
    kl_target: float = 800.0
    K_p: float = 4e-5
    K_i: float = 1e-8
    beta_min: float = 0.0
    beta_max: float = 1.0
    seed: int = 42

    def __post_init__(self):
        if self.T < 2:
            raise ValueError("latent dimension T must be at least 2")
        if self.d1 < 1 or self.epochs < 0 or self.lr <= 0:
            raise ValueError("d1 and lr must be positive and epochs non-negative")
        if self.lam < 0 or self.gamma_sup < 0 or self.kl_target < 0:
            raise ValueError("lam, gamma_sup and kl_target must be non-negative")
        if self.beta_min > self.beta_max:
            raise ValueError("beta_min must not exceed beta_max")

    @classmethod
    def from_dict(cls, doc: dict) -> "TrainConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise ValueError(f"unknown training config keys: {', '.join(unknown)}")
        return cls(**doc)

    @classmethod
    def from_json(cls, path) -> "TrainConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class LatentState:
    mu: np.ndarray
    log_sigma: np.ndarray
    z: np.ndarray
    history: dict = field(default_factory=lambda: {k: [] for k in COMPONENTS})
    min_z: float = np.inf       # smallest sampled coordinate over the whole run
    n_z_samples: int = 0


def full_loss(params, inputs, eps, disc, beta, cfg, anchors=(), weights=None, on_sample=None):
    """Total minimized objective on a fresh tape; returns ``(total, parts, leaves, z)``.

    ``on_sample`` sees the detached sample before the discriminator is applied;
    training uses it to take the discriminator step without a second forward pass.
    """
    tape = Tape()
    leaves = [tape.var(p) for p in params]
    mu, log_sigma = encode(inputs, EncoderParams(*leaves))
    z = reparameterize(mu, log_sigma, eps)
    if on_sample is not None:
        on_sample(z.value)
    rec = recon_loss(z, inputs.adj, weights)
    kl = kl_term(mu, log_sigma)
    tc = tc_loss(z, disc)
    total = rec + kl * beta + tc * cfg.lam
    anc = None
    if anchors:
        anc = anchor_penalty(z, anchors)
        total = total + anc * cfg.gamma_sup
    parts = {
        "recon": float(rec.value),
        "kl": float(kl.value),
        "tc": float(tc.value),
        "anchor": 0.0 if anc is None else float(anc.value),
    }
    return total, parts, leaves, z


def train(inputs, cfg: TrainConfig | None = None, anchors=None, callback=None) -> LatentState:
    """Fit the encoder by full-graph Adam steps.

    Each epoch: one discriminator step on the detached sample, one model step
    on the total loss at the current KL weight, then a controller update from
    that epoch's KL. ``anchors`` is a sequence of ``(node_index, axis)``.
    """
    cfg = cfg or TrainConfig()
    anchors = list(anchors or [])
    rng = Rng(cfg.seed)
    n = inputs.n_nodes
    params = EncoderParams.init(inputs.features.shape[1], cfg.d1, cfg.T, rng.child("init")).as_list()
    disc = Discriminator(cfg.T, rng.child("disc-init"), lr=cfg.lr)
    opt = Adam([p.shape for p in params], lr=cfg.lr)
    pc = PiController(cfg.K_p, cfg.K_i, cfg.kl_target, cfg.beta_min, cfg.beta_max)
    weights = recon_weights(inputs.adj)
    noise = rng.child("eps")
    perm_rng = rng.child("permute")
    state = LatentState(*_snapshot(inputs, params, noise))
    state.min_z = float(state.z.min())
    state.n_z_samples = state.z.size

    for epoch in range(cfg.epochs):
        eps = noise.normal((n, cfg.T))
        beta = pc.beta
        try:
            with np.errstate(over="raise", invalid="raise"):
                d_loss = []
                total, parts, leaves, z = full_loss(
                    params, inputs, eps, disc, beta, cfg, anchors, weights,
                    on_sample=lambda zs: d_loss.append(disc.step(zs, perm_rng)))
        except FloatingPointError as exc:
            raise TrainingError(f"non-finite value at epoch {epoch}: {exc}") from exc
        if not np.isfinite(total.value):
            raise TrainingError(f"non-finite loss at epoch {epoch}: {parts}")
        grads = total.tape.gradient(total, leaves)
        params = opt.step(params, grads)
        pc.update(parts["kl"])

        state.min_z = min(state.min_z, float(z.value.min()))
        state.n_z_samples += z.value.size
        row = dict(parts, beta=beta, total=float(total.value), disc=d_loss[0])
        for k in COMPONENTS:
            state.history[k].append(row[k])
        if callback is not None:
            callback(epoch, row)
        if epoch % 100 == 0:
            log.debug("epoch %d %s", epoch, row)

    mu, log_sigma, z = _snapshot(inputs, params, noise)
    state.mu, state.log_sigma, state.z = mu, log_sigma, z
    state.min_z = min(state.min_z, float(z.min()))
    state.n_z_samples += z.size
    return state


def _snapshot(inputs, params, noise):
    mu, log_sigma = encode(inputs, EncoderParams(*params))
    return mu, log_sigma, reparameterize(mu, log_sigma, noise)
