"""Embedding scatter as hand-written SVG, plus matplotlib figures for histories and sweeps.

SVG viewport: a ``SIZE`` x ``SIZE`` canvas with ``MARGIN`` on each side. The
data box ``[x0, x1] x [y0, y1]`` always contains the origin and every point,
and maps linearly onto the canvas with y flipped::

    px = MARGIN + (x - x0) / (x1 - x0) * (SIZE - 2 * MARGIN)
    py = SIZE - MARGIN - (y - y0) / (y1 - y0) * (SIZE - 2 * MARGIN)
"""
from __future__ import annotations

import numpy as np

SIZE = 480
MARGIN = 40
RADIUS = 3
COLORS = ("#1f77b4", "#d62728")
GRAY = "#888888"


def viewport(mu) -> tuple[float, float, float, float]:
    mu = np.asarray(mu, dtype=np.float64).reshape(-1, 2)
    x0 = min(0.0, float(mu[:, 0].min())) if len(mu) else 0.0
    x1 = max(0.0, float(mu[:, 0].max())) if len(mu) else 1.0
    y0 = min(0.0, float(mu[:, 1].min())) if len(mu) else 0.0
    y1 = max(0.0, float(mu[:, 1].max())) if len(mu) else 1.0
    if x1 - x0 <= 0:
        x1 = x0 + 1.0
    if y1 - y0 <= 0:
        y1 = y0 + 1.0
    return x0, x1, y0, y1


def to_pixels(points, box) -> np.ndarray:
    x0, x1, y0, y1 = box
    p = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    span = SIZE - 2 * MARGIN
    px = MARGIN + (p[:, 0] - x0) / (x1 - x0) * span
    py = SIZE - MARGIN - (p[:, 1] - y0) / (y1 - y0) * span
    return np.stack([px, py], axis=1)


def scatter_svg(mu, kinds, path, truth=None) -> None:
    """Assertion rows of ``mu`` as circles; ``truth`` gives a label per row (``None`` = unknown)."""
    mu = np.asarray(mu, dtype=np.float64)
    if mu.ndim != 2 or mu.shape[1] != 2:
        raise ValueError(f"scatter needs a two-dimensional embedding, got shape {mu.shape}")
    rows = [i for i, k in enumerate(kinds) if k == "assertion"]
    pts = mu[rows]
    box = viewport(pts)
    origin = to_pixels([[0.0, 0.0]], box)[0]
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{origin[1]:.3f}" x2="{SIZE - MARGIN}" y2="{origin[1]:.3f}" stroke="black"/>',
        f'<line x1="{origin[0]:.3f}" y1="{MARGIN}" x2="{origin[0]:.3f}" y2="{SIZE - MARGIN}" stroke="black"/>',
        f'<text x="{SIZE - MARGIN}" y="{SIZE - MARGIN / 3:.3f}" font-size="12" text-anchor="end">axis 0</text>',
        f'<text x="{MARGIN / 3:.3f}" y="{MARGIN}" font-size="12" transform="rotate(-90 {MARGIN / 3:.3f} {MARGIN})" '
        'text-anchor="end">axis 1</text>',
    ]
    for i, (px, py) in zip(rows, to_pixels(pts, box)):
        label = None if truth is None else truth[i]
        color = GRAY if label is None else COLORS[int(label)]
        out.append(f'<circle cx="{px:.3f}" cy="{py:.3f}" r="{RADIUS}" fill="{color}" fill-opacity="0.7"/>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_history(history: dict, path, kl_target: float | None = None) -> None:
    """Loss components per epoch, one panel each."""
    plt = _pyplot()
    keys = [k for k in ("recon", "kl", "tc", "anchor", "beta", "total") if history.get(k)]
    fig, axes = plt.subplots(len(keys), 1, figsize=(6, 1.6 * len(keys) + 0.5), sharex=True, squeeze=False)
    for ax, k in zip(axes[:, 0], keys):
        ax.plot(history[k], lw=0.8)
        if k == "kl" and kl_target is not None:
            ax.axhline(kl_target, color="gray", ls="--", lw=0.8)
        ax.set_ylabel(k)
    axes[-1, 0].set_xlabel("epoch")
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)


def plot_sweep(rows, path) -> None:
    """Mean F1 with one-standard-deviation bars against neutral fraction."""
    plt = _pyplot()
    frac = [r["fraction"] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.errorbar(frac, [r["mean_f1"] for r in rows], yerr=[r["std_f1"] for r in rows], marker="o", capsize=3)
    ax.set_xlabel("neutral fraction")
    ax.set_ylabel("macro F1")
    ax.set_ylim(0, 1.05)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
