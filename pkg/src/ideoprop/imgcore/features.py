"""FAST-9 corners ranked by Harris response, intensity-centroid orientation, steered BRIEF."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ._pattern_table import PATTERN
from .pattern import PATCH_RADIUS
from .pnm import ImageTooSmallError, RasterImage

MIN_SIDE = 32
DESCRIPTOR_BORDER = 20
DESCRIPTOR_BYTES = 32
HARRIS_K = 0.04
HARRIS_SIGMA = 1.0
SMOOTHING_SIGMA = 2.0

# Bresenham circle of radius 3, clockwise from 12 o'clock, as (dx, dy)
CIRCLE = np.array([
    (0, -3), (1, -3), (2, -2), (3, -1), (3, 0), (3, 1), (2, 2), (1, 3),
    (0, 3), (-1, 3), (-2, 2), (-3, 1), (-3, 0), (-3, -1), (-2, -2), (-1, -3),
])
ARC = 9

_PATTERN = np.array(PATTERN, dtype=np.float64)
_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint16)

_yy, _xx = np.mgrid[-PATCH_RADIUS:PATCH_RADIUS + 1, -PATCH_RADIUS:PATCH_RADIUS + 1]
_DISC = (_xx ** 2 + _yy ** 2) <= PATCH_RADIUS ** 2


@dataclass(frozen=True)
class Keypoint:
    x: float
    y: float
    response: float
    angle: float


def _segment_masks(img: np.ndarray, threshold: int):
    """Pixels (inside a 3 px border) passing the FAST-9 arc test, as ``(ys, xs, score)``.

    Any 9 contiguous circle pixels include two of the four compass points, so
    the full arc test only runs where two compass points already pass.
    """
    h, w = img.shape
    center = img[3:h - 3, 3:w - 3]

    def ring(k):
        dx, dy = CIRCLE[k]
        return img[3 + dy:h - 3 + dy, 3 + dx:w - 3 + dx]

    compass = [ring(k) for k in (0, 4, 8, 12)]
    n_bright = sum((c > center + threshold).astype(np.int8) for c in compass)
    n_dark = sum((c < center - threshold).astype(np.int8) for c in compass)
    ys, xs = np.nonzero((n_bright >= 2) | (n_dark >= 2))
    ys, xs = ys + 3, xs + 3
    c = img[ys, xs]
    vals = np.stack([img[ys + dy, xs + dx] for dx, dy in CIRCLE])
    keep = np.zeros(len(ys), dtype=bool)
    for flags in (vals > c + threshold, vals < c - threshold):
        run = np.zeros(len(ys), dtype=np.int16)
        best = np.zeros(len(ys), dtype=np.int16)
        for k in range(len(CIRCLE) + ARC - 1):
            run = (run + 1) * flags[k % len(CIRCLE)]
            np.maximum(best, run, out=best)
        keep |= best >= ARC
    vals, c = vals[:, keep], c[keep]
    score = np.maximum(
        np.where(vals > c + threshold, vals - c - threshold, 0).sum(axis=0),
        np.where(vals < c - threshold, c - vals - threshold, 0).sum(axis=0),
    )
    return ys[keep], xs[keep], score


def segment_test(img: RasterImage, x: int, y: int, threshold: int) -> bool:
    """FAST-9 test at a single pixel (reference implementation, used for checking)."""
    p = img.luma.astype(np.int32)
    c = p[y, x]
    vals = [p[y + dy, x + dx] for dx, dy in CIRCLE]
    for sign in (1, -1):
        flags = [(v - c) * sign > threshold for v in vals]
        run = 0
        for f in flags + flags[:ARC - 1]:
            run = run + 1 if f else 0
            if run >= ARC:
                return True
    return False


def _gradients(f: np.ndarray):
    ix = ndimage.sobel(f, axis=1, mode="reflect")
    iy = ndimage.sobel(f, axis=0, mode="reflect")
    return ix * ix, iy * iy, ix * iy


def harris_response(img: RasterImage) -> np.ndarray:
    """Harris measure at every pixel (Sobel gradients, Gaussian window sigma 1)."""
    sxx, syy, sxy = (ndimage.gaussian_filter(m, HARRIS_SIGMA) for m in _gradients(img.pixels))
    return sxx * syy - sxy * sxy - HARRIS_K * (sxx + syy) ** 2


def _gauss_kernel() -> np.ndarray:
    # same taps as ndimage.gaussian_filter with its default truncate=4
    r = int(4.0 * HARRIS_SIGMA + 0.5)
    x = np.arange(-r, r + 1)
    k = np.exp(-0.5 * (x / HARRIS_SIGMA) ** 2)
    k /= k.sum()
    return np.outer(k, k)


_WINDOW = _gauss_kernel()


def harris_at(img: RasterImage, xs, ys) -> np.ndarray:
    """``harris_response`` evaluated only at the given pixels."""
    xs, ys = np.asarray(xs, dtype=int), np.asarray(ys, dtype=int)
    if len(xs) == 0:
        return np.zeros(0)
    r = _WINDOW.shape[0] // 2
    oy, ox = np.mgrid[-r:r + 1, -r:r + 1]
    py, px = ys[:, None, None] + r + oy, xs[:, None, None] + r + ox
    sums = []
    for m in _gradients(img.pixels):
        padded = np.pad(m, r, mode="symmetric")  # scipy's "reflect"
        sums.append((padded[py, px] * _WINDOW).sum(axis=(1, 2)))
    sxx, syy, sxy = sums
    return sxx * syy - sxy * sxy - HARRIS_K * (sxx + syy) ** 2


def orientations(img: RasterImage, xs, ys) -> np.ndarray:
    """Intensity-centroid angles over the radius-15 disc, in [0, 2*pi)."""
    p = img.pixels
    h, w = p.shape
    xs = np.asarray(xs, dtype=int)[:, None]
    ys = np.asarray(ys, dtype=int)[:, None]
    dx, dy = _xx[_DISC][None, :], _yy[_DISC][None, :]
    px, py = xs + dx, ys + dy
    ok = (px >= 0) & (px < w) & (py >= 0) & (py < h)
    vals = np.where(ok, p[np.clip(py, 0, h - 1), np.clip(px, 0, w - 1)], 0.0)
    m10 = (vals * dx).sum(axis=1)
    m01 = (vals * dy).sum(axis=1)
    return np.mod(np.arctan2(m01, m10), 2 * np.pi)


def orientation(img: RasterImage, x: int, y: int) -> float:
    return float(orientations(img, [x], [y])[0])


def _ranked_corners(img: RasterImage, fast_threshold: int):
    if not 5 <= fast_threshold <= 100:
        raise ValueError(f"fast_threshold must lie in [5, 100], got {fast_threshold}")
    if img.width < MIN_SIDE or img.height < MIN_SIDE:
        raise ImageTooSmallError(f"image is {img.width}x{img.height}; need at least {MIN_SIDE}x{MIN_SIDE}")
    p = img.luma.astype(np.int32)
    cy, cx, score = _segment_masks(p, fast_threshold)
    full = np.zeros(p.shape)
    full[cy, cx] = score
    local_max = ndimage.maximum_filter(full, size=3, mode="constant")
    peak = (full[cy, cx] == local_max[cy, cx]) & (score > 0)
    ys, xs = cy[peak], cx[peak]
    resp = harris_at(img, xs, ys)
    order = np.lexsort((xs, ys, -resp))
    return xs[order], ys[order], resp[order]


def _keypoints(img, xs, ys, resp) -> list[Keypoint]:
    if len(xs) == 0:
        return []
    angles = orientations(img, xs, ys)
    return [Keypoint(float(x), float(y), float(r), float(a)) for x, y, r, a in zip(xs, ys, resp, angles)]


def detect_keypoints(img: RasterImage, fast_threshold: int = 20, max_kp: int = 500) -> list[Keypoint]:
    """Segment-test corners, 3x3 non-max suppressed on FAST score, best ``max_kp`` by Harris."""
    xs, ys, resp = _ranked_corners(img, fast_threshold)
    return _keypoints(img, xs[:max_kp], ys[:max_kp], resp[:max_kp])


def smoothed(img: RasterImage) -> np.ndarray:
    return ndimage.gaussian_filter(img.pixels, SMOOTHING_SIGMA, mode="reflect")


def describe_many(img: RasterImage, kps, smooth: np.ndarray | None = None) -> np.ndarray:
    """Steered BRIEF descriptors, one 32-byte row per keypoint."""
    if smooth is None:
        smooth = smoothed(img)
    if len(kps) == 0:
        return np.zeros((0, DESCRIPTOR_BYTES), dtype=np.uint8)
    xs = np.array([k.x for k in kps])[:, None]
    ys = np.array([k.y for k in kps])[:, None]
    c = np.cos([k.angle for k in kps])[:, None]
    s = np.sin([k.angle for k in kps])[:, None]
    px1, py1, px2, py2 = _PATTERN.T
    x1 = np.rint(xs + c * px1 - s * py1).astype(int)
    y1 = np.rint(ys + s * px1 + c * py1).astype(int)
    x2 = np.rint(xs + c * px2 - s * py2).astype(int)
    y2 = np.rint(ys + s * px2 + c * py2).astype(int)
    bits = smooth[y1, x1] < smooth[y2, x2]
    return np.packbits(bits, axis=1)


def describe(img: RasterImage, kp: Keypoint) -> np.ndarray:
    return describe_many(img, [kp])[0]


def describable(img: RasterImage, kp: Keypoint) -> bool:
    b = DESCRIPTOR_BORDER
    return b <= kp.x < img.width - b and b <= kp.y < img.height - b


def hamming(a: np.ndarray, b: np.ndarray) -> int:
    return int(_POPCOUNT[np.bitwise_xor(a, b)].sum())


def hamming_matrix(da: np.ndarray, db: np.ndarray) -> np.ndarray:
    """All pairwise Hamming distances between two descriptor stacks."""
    if len(da) == 0 or len(db) == 0:
        return np.zeros((len(da), len(db)), dtype=np.int64)
    ua = np.unpackbits(da, axis=1).astype(np.float32)
    ub = np.unpackbits(db, axis=1).astype(np.float32)
    same_ones = ua @ ub.T
    return np.rint(ua.sum(1)[:, None] + ub.sum(1)[None, :] - 2 * same_ones).astype(np.int64)


def extract(img: RasterImage, fast_threshold: int = 20, max_kp: int = 500):
    """Keypoints far enough from the border to describe, with their descriptors."""
    xs, ys, resp = _ranked_corners(img, fast_threshold)
    b = DESCRIPTOR_BORDER
    ok = (xs >= b) & (xs < img.width - b) & (ys >= b) & (ys < img.height - b)
    kps = _keypoints(img, xs[ok][:max_kp], ys[ok][:max_kp], resp[ok][:max_kp])
    return kps, describe_many(img, kps)
