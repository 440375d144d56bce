"""Non-negative matrix factorization of the user x assertion incidence matrix."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bhin import ASSERTION, USER, BhinGraph
from .numkit import Rng

EPS = 1e-12


class DegenerateMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class NmfFactors:
    W: np.ndarray  # users x k
    H: np.ndarray  # k x assertions
    losses: list = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.W.shape[1]


def frobenius(B, W, H) -> float:
    r = B - W @ H
    return float(np.sum(r * r))


def nmf_factorize(B, k: int = 2, iters: int = 500, seed: int = 42, callback=None) -> NmfFactors:
    """Lee-Seung multiplicative updates for ``min ||B - WH||_F^2``.

    Entries are floored at ``EPS`` after each update so a factor that touches
    zero can still move again.
    """
    B = np.asarray(B, dtype=np.float64)
    if B.ndim != 2 or B.size == 0:
        raise DegenerateMatrixError("B must be a non-empty matrix")
    if np.any(B < 0):
        raise ValueError("B must be non-negative")
    if not np.any(B > 0):
        raise DegenerateMatrixError("B is all zero; nothing to factorize")
    if k < 1:
        raise ValueError("rank k must be at least 1")
    rng = Rng(seed)
    scale = np.sqrt(B.mean() / k)
    W = rng.uniform((B.shape[0], k), 0.0, 1.0) * scale + EPS
    H = rng.uniform((k, B.shape[1]), 0.0, 1.0) * scale + EPS
    losses = [frobenius(B, W, H)]
    for it in range(iters):
        H = np.maximum(H * (W.T @ B) / (W.T @ W @ H + EPS), EPS)
        W = np.maximum(W * (B @ H.T) / (W @ H @ H.T + EPS), EPS)
        losses.append(frobenius(B, W, H))
        if callback is not None:
            callback(it, W, H)
    return NmfFactors(W, H, losses)


def nmf_classify(f: NmfFactors) -> tuple[np.ndarray, np.ndarray]:
    """Per-assertion argmax over components, lower index on ties, plus a tie flag."""
    H = f.H
    axis = H.argmax(axis=0)
    top = H[axis, np.arange(H.shape[1])]
    tie = (H == top[None, :]).sum(axis=0) > 1
    return axis, tie


def incidence(g: BhinGraph) -> tuple[np.ndarray, list[int], list[int]]:
    """User x assertion 0/1 matrix with the node indices of its rows and columns."""
    users, assertions = g.indices(USER), g.indices(ASSERTION)
    adj = g.adjacency()
    return adj[np.ix_(users, assertions)], users, assertions
