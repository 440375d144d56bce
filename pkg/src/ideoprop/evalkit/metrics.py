"""Axis assignment, axis-to-label mapping and classification metrics."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.special import ndtr

N_CLASSES = 2


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class MetricsReport:
    precision: float
    recall: float
    f1: float
    purity: float
    axis_mapping: tuple  # axis_mapping[axis] = label
    n_evaluated: int
    averaging: str = "macro"

    def to_json(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "purity": self.purity,
            "axis_mapping": list(self.axis_mapping),
            "n_evaluated": self.n_evaluated,
            "averaging": self.averaging,
        }


def assign_axis(row) -> tuple[int, bool]:
    """Index of the largest coordinate (lowest index on ties) and whether it tied."""
    row = np.asarray(row, dtype=np.float64)
    if row.ndim != 1 or len(row) < 2:
        raise ValueError("need a vector with at least two coordinates")
    k = int(np.argmax(row))
    return k, bool(np.sum(row == row[k]) > 1)


def assign_axes(mu) -> tuple[np.ndarray, np.ndarray]:
    mu = np.asarray(mu, dtype=np.float64)
    axis = mu.argmax(axis=1)
    top = mu[np.arange(len(mu)), axis]
    return axis, (mu == top[:, None]).sum(axis=1) > 1


def neutral_flag(row, delta: float = 0.1) -> bool:
    """Near the origin (sup-norm under ``delta``) or near the diagonal.

    A row with no positive coordinate has no leaning at all and is flagged.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    row = np.asarray(row, dtype=np.float64)
    if np.max(np.abs(row)) < delta:
        return True
    hi = row.max()
    if hi <= 0:
        return True
    return bool(row.min() / hi > 1.0 - delta)


def rectified_mean(mu, log_sigma) -> np.ndarray:
    """E[max(0, X)] for X ~ N(mu, sigma^2), elementwise."""
    mu = np.asarray(mu, dtype=np.float64)
    sigma = np.exp(np.asarray(log_sigma, dtype=np.float64))
    r = mu / sigma
    return mu * ndtr(r) + sigma * np.exp(-0.5 * r * r) / np.sqrt(2 * np.pi)


def on_axis(coords, axes, ratio: float = 0.25) -> np.ndarray:
    """Rows whose largest other coordinate is below ``ratio`` times the chosen one."""
    coords = np.asarray(coords, dtype=np.float64)
    r = np.arange(len(coords))
    on = coords[r, axes]
    rest = coords.copy()
    rest[r, axes] = -np.inf
    return (on > 0) & (rest.max(axis=1) < ratio * on)


def _scores(pred: np.ndarray, truth: np.ndarray) -> tuple[float, float, float]:
    ps, rs, fs = [], [], []
    for c in range(N_CLASSES):
        tp = float(np.sum((pred == c) & (truth == c)))
        n_pred, n_true = float(np.sum(pred == c)), float(np.sum(truth == c))
        p = tp / n_pred if n_pred else 0.0
        r = tp / n_true if n_true else 0.0
        ps.append(p)
        rs.append(r)
        fs.append(2 * p * r / (p + r) if p + r else 0.0)
    return float(np.mean(ps)), float(np.mean(rs)), float(np.mean(fs))


def purity(axes, labels) -> float:
    axes, labels = np.asarray(axes), np.asarray(labels)
    if len(axes) == 0:
        raise EvaluationError("purity of an empty set")
    hit = 0
    for k in np.unique(axes):
        hit += np.bincount(labels[axes == k], minlength=N_CLASSES).max()
    return hit / len(axes)


def candidate_mappings(n_axes: int):
    """Every axis -> label map that uses both labels (for two axes: the two permutations)."""
    for m in product(range(N_CLASSES), repeat=n_axes):
        if len(set(m)) == N_CLASSES:
            yield m


def evaluate(assignments: dict, truth: dict, exclude=(), mapping=None, n_axes: int | None = None) -> MetricsReport:
    """Metrics over ``{assertion_id: axis}`` against ``{assertion_id: label}``.

    Without ``mapping`` the axis -> label map maximizing macro-F1 is chosen
    (first one wins a tie); a given ``mapping`` is used as is.
    """
    exclude = set(exclude)
    ids = sorted(a for a in assignments if a not in exclude)
    if not ids:
        raise EvaluationError("nothing to evaluate after exclusions")
    missing = [a for a in ids if a not in truth]
    if missing:
        raise EvaluationError(f"no truth label for assertion {missing[0]!r}")
    axes = np.array([assignments[a] for a in ids], dtype=np.int64)
    labels = np.array([truth[a] for a in ids], dtype=np.int64)
    if np.any((labels < 0) | (labels >= N_CLASSES)):
        raise EvaluationError("truth labels must be 0 or 1")
    if n_axes is None:
        n_axes = max(N_CLASSES, int(axes.max()) + 1)
    if mapping is not None:
        options = [tuple(int(x) for x in mapping)]
        if len(options[0]) < n_axes:
            raise EvaluationError(f"mapping covers {len(options[0])} axes, need {n_axes}")
    else:
        options = list(candidate_mappings(n_axes))
    best = None
    for m in options:
        scores = _scores(np.asarray(m)[axes], labels)
        if best is None or scores[2] > best[1][2]:
            best = (m, scores)
    m, (p, r, f) = best
    return MetricsReport(p, r, f, float(purity(axes, labels)), tuple(m), len(ids))


def anchor_mapping(anchors: dict, truth: dict, n_axes: int = 2) -> tuple:
    """Axis -> label map implied by anchors ``{assertion_id: axis}`` (majority label per axis)."""
    mapping = list(range(n_axes)) if n_axes == N_CLASSES else [0] * n_axes
    for k in range(n_axes):
        votes = [truth[a] for a, ax in anchors.items() if ax == k and a in truth]
        if votes:
            mapping[k] = int(np.bincount(votes, minlength=N_CLASSES).argmax())
    return tuple(mapping)
