"""Procedural near-duplicate image corpus with recorded edit chains."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ..imgcore import RasterImage
from ..imgcore.resample import resize_array, to_uint8
from ..numkit import Rng

SIDE = 256
KINDS = ("resize", "crop", "brightness", "overlay", "noise")
NOISE_SIGMA = 3.0


@dataclass(frozen=True)
class TransformSpec:
    """One edit. ``params`` per kind:

    resize: (factor,)                           factor in [0.5, 2]
    crop: (fraction, ax, ay)                    fraction <= 0.2 cut from each axis, window offset ax, ay in [0, 1]
    brightness: (delta,)                        |delta| <= 30, clamped
    overlay: (x, y, w, h)                       fractions of the image, w * h <= 0.15
    noise: (seed,)                              Gaussian pixel noise standing in for recompression
    """

    kind: str
    params: tuple

    def __post_init__(self):
        p = self.params
        ok = {
            "resize": lambda: len(p) == 1 and 0.5 <= p[0] <= 2.0,
            "crop": lambda: len(p) == 3 and 0.0 <= p[0] <= 0.2 and 0 <= p[1] <= 1 and 0 <= p[2] <= 1,
            "brightness": lambda: len(p) == 1 and abs(p[0]) <= 30,
            "overlay": lambda: len(p) == 4 and p[2] * p[3] <= 0.15 and p[0] + p[2] <= 1 and p[1] + p[3] <= 1,
            "noise": lambda: len(p) == 1,
        }.get(self.kind)
        if ok is None:
            raise ValueError(f"unknown transform kind {self.kind!r}")
        if not ok():
            raise ValueError(f"parameters {p} out of range for {self.kind}")

    def to_json(self) -> dict:
        return {"kind": self.kind, "params": list(self.params)}


def apply_transform(img: RasterImage, spec: TransformSpec) -> RasterImage:
    a = img.luma
    h, w = a.shape
    p = spec.params
    if spec.kind == "resize":
        nw, nh = max(1, int(round(w * p[0]))), max(1, int(round(h * p[0])))
        return RasterImage(to_uint8(resize_array(img.pixels, nw, nh)))
    if spec.kind == "crop":
        cw, ch = int(round(w * (1 - p[0]))), int(round(h * (1 - p[0])))
        x0, y0 = int(round((w - cw) * p[1])), int(round((h - ch) * p[2]))
        return RasterImage(a[y0:y0 + ch, x0:x0 + cw].copy())
    if spec.kind == "brightness":
        return RasterImage(np.clip(a.astype(np.int32) + int(p[0]), 0, 255).astype(np.uint8))
    if spec.kind == "overlay":
        x0, y0 = int(p[0] * w), int(p[1] * h)
        x1, y1 = x0 + int(p[2] * w), y0 + int(p[3] * h)
        out = a.copy()
        out[y0:y1, x0:x1] = 255
        # dark horizontal bars read as a caption strip
        out[y0 + 2:y1 - 2:6, x0 + 3:x1 - 3] = 20
        out[y0 + 3:y1 - 2:6, x0 + 3:x1 - 3] = 20
        return RasterImage(out)
    noise = Rng(int(p[0])).normal(a.shape) * NOISE_SIGMA
    return RasterImage(to_uint8(a + noise))


def apply_chain(img: RasterImage, chain) -> RasterImage:
    for spec in chain:
        img = apply_transform(img, spec)
    return img


def draw_base(rng: Rng, side: int = SIDE) -> RasterImage:
    """Random rectangles, ellipses and thick lines over a linear-gradient background."""
    yy, xx = np.mgrid[0:side, 0:side].astype(np.float64)
    g = rng.uniform(2, -0.3, 0.3)
    img = rng.uniform(None, 60, 190) + g[0] * xx + g[1] * yy
    for _ in range(int(rng.integers(12, 20))):
        kind = int(rng.integers(0, 3))
        val = rng.uniform(None, 0, 255)
        cx, cy = rng.uniform(2, 0, side)
        if kind == 0:
            hw, hh = rng.uniform(2, 6, side / 5)
            mask = (np.abs(xx - cx) <= hw) & (np.abs(yy - cy) <= hh)
        elif kind == 1:
            rx, ry = rng.uniform(2, 6, side / 6)
            mask = ((xx - cx) / rx) ** 2 + ((yy - cy) / ry) ** 2 <= 1
        else:
            ang = rng.uniform(None, 0, np.pi)
            length = rng.uniform(None, side / 6, side / 2)
            t = (xx - cx) * np.cos(ang) + (yy - cy) * np.sin(ang)
            d = -(xx - cx) * np.sin(ang) + (yy - cy) * np.cos(ang)
            mask = (np.abs(t) <= length / 2) & (np.abs(d) <= rng.uniform(None, 1.5, 4))
        img = np.where(mask, val, img)
    return RasterImage(to_uint8(img))


def random_spec(rng: Rng) -> TransformSpec:
    kind = KINDS[int(rng.integers(0, len(KINDS)))]
    if kind == "resize":
        return TransformSpec(kind, (round(float(rng.uniform(None, 0.5, 2.0)), 4),))
    if kind == "crop":
        return TransformSpec(kind, (round(float(rng.uniform(None, 0.05, 0.2)), 4),
                                    round(float(rng.uniform()), 4), round(float(rng.uniform()), 4)))
    if kind == "brightness":
        return TransformSpec(kind, (int(rng.integers(-30, 31)),))
    if kind == "overlay":
        w = round(float(rng.uniform(None, 0.2, 0.6)), 4)
        h = round(min(0.15 / w, float(rng.uniform(None, 0.08, 0.25))), 4)
        return TransformSpec(kind, (round(float(rng.uniform(None, 0, 1 - w)), 4),
                                    round(float(rng.uniform(None, 0, 1 - h)), 4), w, h))
    return TransformSpec(kind, (int(rng.integers(0, 2 ** 31)),))


@dataclass
class ImageSuite:
    images: dict                                    # image_id -> RasterImage
    groups: dict                                    # image_id -> base image_id
    transforms: dict = field(default_factory=dict)  # variant id -> (base id, [TransformSpec])

    @property
    def true_pairs(self) -> set:
        members: dict = {}
        for i, b in self.groups.items():
            members.setdefault(b, []).append(i)
        return {tuple(sorted(p)) for m in members.values() for p in combinations(m, 2)}


def gen_image_suite(n_base: int, variants_per_base: int, seed: int = 42) -> ImageSuite:
    if n_base < 2:
        raise ValueError("need at least two base images")
    if variants_per_base < 0:
        raise ValueError("variants_per_base must be non-negative")
    rng = Rng(seed)
    suite = ImageSuite({}, {})
    for b in range(n_base):
        bid = f"b{b:03d}"
        base = draw_base(rng.child("base", b))
        suite.images[bid] = base
        suite.groups[bid] = bid
        vr = rng.child("variants", b)
        for v in range(variants_per_base):
            chain = [random_spec(vr) for _ in range(int(vr.integers(1, 3)))]
            vid = f"{bid}v{v}"
            suite.images[vid] = apply_chain(base, chain)
            suite.groups[vid] = bid
            suite.transforms[vid] = (bid, chain)
    return suite
