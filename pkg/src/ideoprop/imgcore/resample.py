from __future__ import annotations

import numpy as np

from .pnm import RasterImage


def resample_matrix(n_in: int, n_out: int) -> np.ndarray:
    """Linear map from ``n_in`` samples to ``n_out``: box averaging when shrinking, bilinear otherwise."""
    m = np.zeros((n_out, n_in))
    if n_out < n_in:
        scale = n_in / n_out
        for i in range(n_out):
            lo, hi = i * scale, (i + 1) * scale
            j0, j1 = int(np.floor(lo)), min(int(np.ceil(hi)), n_in)
            for j in range(j0, j1):
                m[i, j] = min(hi, j + 1) - max(lo, j)
            m[i] /= scale
    else:
        pos = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
        pos = np.clip(pos, 0, n_in - 1)
        j0 = np.floor(pos).astype(int)
        j1 = np.minimum(j0 + 1, n_in - 1)
        frac = pos - j0
        m[np.arange(n_out), j0] += 1 - frac
        m[np.arange(n_out), j1] += frac
    return m


def resize_array(a: np.ndarray, width: int, height: int) -> np.ndarray:
    rows = resample_matrix(a.shape[0], height)
    cols = resample_matrix(a.shape[1], width)
    return rows @ np.asarray(a, dtype=np.float64) @ cols.T


def to_uint8(a: np.ndarray) -> np.ndarray:
    return np.clip(np.floor(a + 0.5), 0, 255).astype(np.uint8)


def resize(img: RasterImage, width: int, height: int) -> RasterImage:
    return RasterImage(to_uint8(resize_array(img.pixels, width, height)))


def normalize_size(img: RasterImage, max_side: int = 512) -> RasterImage:
    """Scale so the longer side equals ``max_side``, keeping the aspect ratio."""
    s = max_side / max(img.width, img.height)
    w = max(1, int(round(img.width * s)))
    h = max(1, int(round(img.height * s)))
    if (w, h) == (img.width, img.height):
        return img
    return resize(img, w, h)
