"""Group near-duplicate images into visual assertions.

Pipeline: cheap candidate filter -> keypoint matching -> RANSAC affine fit ->
plausibility gate -> connected components over the verified pairs.
"""
from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from .imgcore import RasterImage, extract, hamming_matrix, normalize_size
from .imgcore.resample import resize_array
from .numkit import Rng
from .numkit.rng import derive_seed

log = logging.getLogger(__name__)


class NearDupError(ValueError):
    pass


@dataclass(frozen=True)
class VisualAssertion:
    assertion_id: int
    image_ids: frozenset

    def to_json(self) -> dict:
        return {"assertion_id": self.assertion_id, "image_ids": sorted(self.image_ids)}


@dataclass(frozen=True)
class ExternalEmbeddings:
    vectors: dict
    cosine_threshold: float = 0.8

    def __post_init__(self):
        if not -1.0 <= self.cosine_threshold <= 1.0:
            raise ValueError("cosine_threshold must lie in [-1, 1]")

    @classmethod
    def from_csv(cls, path, cosine_threshold: float = 0.8) -> "ExternalEmbeddings":
        vectors = {}
        with open(path, newline="") as fh:
            for lineno, row in enumerate(csv.reader(fh), 1):
                if not row:
                    continue
                try:
                    vectors[row[0]] = np.array([float(v) for v in row[1:]])
                except ValueError as exc:
                    if lineno == 1:  # header row
                        continue
                    raise NearDupError(f"{path}: line {lineno}: {exc}") from exc
        return cls(vectors, cosine_threshold)


@dataclass(frozen=True)
class PerceptualHash:
    hamming_threshold: int = 28

    def __post_init__(self):
        if not 0 <= self.hamming_threshold <= 64:
            raise ValueError("hamming_threshold must lie in [0, 64]")


@dataclass(frozen=True)
class AffineFit:
    a11: float
    a12: float
    a21: float
    a22: float
    tx: float
    ty: float
    inliers: int
    inlier_ratio: float

    @property
    def linear(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])

    @property
    def translation(self) -> np.ndarray:
        return np.array([self.tx, self.ty])


@dataclass(frozen=True)
class NearDupParams:
    fast_threshold: int = 20
    max_kp: int = 500
    max_side: int = 512
    min_inliers: int = 15
    min_ratio: float = 0.2
    tol_px: float = 3.0
    iters: int = 1000
    seed: int = 42


def dhash64(img: RasterImage) -> int:
    """Difference hash: bit ``8*i + j`` is set iff cell (i, j) is brighter than (i, j+1)."""
    small = resize_array(img.pixels, 9, 8)
    bits = (small[:, :-1] > small[:, 1:]).ravel()
    return int(sum(1 << k for k, b in enumerate(bits) if b))


def hash_distance(a: int, b: int) -> int:
    return bin(a ^ b).count("1")


def candidate_pairs(corpus: dict, filt=None) -> list[tuple]:
    """Unordered id pairs ``(a, b)`` with ``a < b`` that survive the filter."""
    ids = sorted(corpus)
    if filt is None:
        return list(combinations(ids, 2))
    if isinstance(filt, PerceptualHash):
        hashes = {i: dhash64(corpus[i]) for i in ids}
        return [(a, b) for a, b in combinations(ids, 2)
                if hash_distance(hashes[a], hashes[b]) <= filt.hamming_threshold]
    if isinstance(filt, ExternalEmbeddings):
        missing = [i for i in ids if i not in filt.vectors]
        if missing:
            raise NearDupError(f"no embedding vector for image {missing[0]!r}")
        vecs = np.array([filt.vectors[i] for i in ids], dtype=np.float64)
        norms = np.linalg.norm(vecs, axis=1)
        norms[norms == 0] = 1.0
        unit = vecs / norms[:, None]
        cos = unit @ unit.T
        return [(ids[i], ids[j]) for i, j in combinations(range(len(ids)), 2)
                if cos[i, j] >= filt.cosine_threshold]
    raise TypeError(f"unknown candidate filter {filt!r}")


def _mutual_ratio_matches(d: np.ndarray, max_distance: int, ratio: float) -> list[tuple[int, int]]:
    na, nb = d.shape
    if na == 0 or nb == 0:
        return []
    best_ab = d.argmin(axis=1)
    best_ba = d.argmin(axis=0)
    rows = np.arange(na)
    best = d[rows, best_ab]
    ok = (best_ba[best_ab] == rows) & (best <= max_distance)
    if nb > 1:
        ok &= best <= ratio * np.partition(d, 1, axis=1)[:, 1]
    if na > 1:
        ok &= best <= ratio * np.partition(d, 1, axis=0)[1, best_ab]
    return [(int(i), int(best_ab[i])) for i in np.nonzero(ok)[0]]


def match_descriptors(da: np.ndarray, db: np.ndarray, max_distance: int = 64,
                      ratio: float = 0.8) -> list[tuple[int, int]]:
    """Mutual nearest neighbours passing an absolute distance cap and the ratio test both ways."""
    if len(da) == 0 or len(db) == 0:
        return []
    d = hamming_matrix(np.asarray(da, dtype=np.uint8), np.asarray(db, dtype=np.uint8))
    return _mutual_ratio_matches(d, max_distance, ratio)


def _fit_affine(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Least-squares 2x3 affine mapping ``src`` onto ``dst``."""
    design = np.hstack([src, np.ones((len(src), 1))])
    sol, *_ = np.linalg.lstsq(design, dst, rcond=None)
    return sol.T


def _residuals(model: np.ndarray, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    return np.linalg.norm(src @ model[:, :2].T + model[:, 2] - dst, axis=1)


def ransac_affine(matches, iters: int = 1000, tol_px: float = 3.0, rng: Rng | None = None):
    """Best 3-point affine by inlier count, refit on its inliers; ``None`` if under 3 inliers."""
    if tol_px <= 0:
        raise ValueError("tol_px must be positive")
    pts = np.asarray(matches, dtype=np.float64).reshape(-1, 2, 2)
    n = len(pts)
    if n < 3:
        return None
    src, dst = pts[:, 0], pts[:, 1]
    rng = rng or Rng(0)
    samples = rng.integers(0, n, (iters, 3))
    p = src[samples]                                   # iters x 3 x 2
    design = np.concatenate([p, np.ones((iters, 3, 1))], axis=2)
    det = np.linalg.det(design)
    spread = np.abs(p - p.mean(axis=1, keepdims=True)).max(axis=(1, 2)) + 1e-12
    ok = np.abs(det) > 1e-9 * spread ** 2
    best_count, best_mask = 0, None
    if ok.any():
        sol = np.linalg.solve(design[ok], dst[samples[ok]])  # k x 3 x 2, rows (x, y, 1)
        ex = src[:, 0] * sol[:, 0, 0, None] + src[:, 1] * sol[:, 1, 0, None] + sol[:, 2, 0, None] - dst[:, 0]
        ey = src[:, 0] * sol[:, 0, 1, None] + src[:, 1] * sol[:, 1, 1, None] + sol[:, 2, 1, None] - dst[:, 1]
        inl = ex * ex + ey * ey <= tol_px * tol_px
        counts = inl.sum(axis=1)
        k = int(np.argmax(counts))
        best_count, best_mask = int(counts[k]), inl[k]
    if best_count < 3:
        return None
    model = _fit_affine(src[best_mask], dst[best_mask])
    for _ in range(3):
        mask = _residuals(model, src, dst) <= tol_px
        if mask.sum() < 3 or np.array_equal(mask, best_mask):
            break
        best_mask = mask
        model = _fit_affine(src[mask], dst[mask])
    count = int((_residuals(model, src, dst) <= tol_px).sum())
    if count < 3:
        return None
    return AffineFit(model[0, 0], model[0, 1], model[1, 0], model[1, 1], model[0, 2], model[1, 2],
                     count, count / n)


def plausible(fit: AffineFit, min_inliers: int = 15, min_ratio: float = 0.2,
              sv_range: tuple[float, float] = (0.2, 5.0)) -> bool:
    if fit.inliers < min_inliers or fit.inlier_ratio < min_ratio:
        return False
    a = fit.linear
    if np.linalg.det(a) <= 0:
        return False
    sv = np.linalg.svd(a, compute_uv=False)
    return bool(sv.min() >= sv_range[0] and sv.max() <= sv_range[1])


class UnionFind:
    def __init__(self, items):
        self.parent = {i: i for i in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller id becomes the root so roots are deterministic
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def cluster_assertions(verified_pairs, all_ids) -> list[VisualAssertion]:
    ids = sorted(set(all_ids))
    uf = UnionFind(ids)
    for a, b in verified_pairs:
        for x in (a, b):
            if x not in uf.parent:
                raise NearDupError(f"pair references unknown image id {x!r}")
        uf.union(a, b)
    groups: dict = {}
    for i in ids:
        groups.setdefault(uf.find(i), set()).add(i)
    ordered = sorted(groups.values(), key=min)
    return [VisualAssertion(k, frozenset(g)) for k, g in enumerate(ordered)]


@dataclass(frozen=True)
class ImageFeatures:
    xy: np.ndarray    # keypoint coordinates in the size-normalized frame
    desc: np.ndarray  # packed descriptors, 32 bytes per row
    bits: np.ndarray  # unpacked descriptor bits as float32, for matmul distances

    def distances(self, other: "ImageFeatures") -> np.ndarray:
        if len(self.desc) == 0 or len(other.desc) == 0:
            return np.zeros((len(self.desc), len(other.desc)), dtype=np.int64)
        same = self.bits @ other.bits.T
        ones_a, ones_b = self.bits.sum(axis=1), other.bits.sum(axis=1)
        return np.rint(ones_a[:, None] + ones_b[None, :] - 2 * same).astype(np.int64)


def image_features(img: RasterImage, params: NearDupParams = NearDupParams()) -> ImageFeatures:
    norm = normalize_size(img, params.max_side)
    kps, desc = extract(norm, params.fast_threshold, params.max_kp)
    xy = np.array([(k.x, k.y) for k in kps], dtype=np.float64).reshape(-1, 2)
    return ImageFeatures(xy, desc, np.unpackbits(desc, axis=1).astype(np.float32))


def verify_pair(id_a, feat_a: ImageFeatures, id_b, feat_b: ImageFeatures,
                params: NearDupParams = NearDupParams()):
    """Return ``(is_near_duplicate, fit)``; symmetric in its two images.

    Pairs with fewer descriptor matches than ``min_inliers`` cannot pass the
    gate, so RANSAC is skipped for them and ``fit`` is ``None``.
    """
    if id_b < id_a:
        id_a, feat_a, id_b, feat_b = id_b, feat_b, id_a, feat_a
    pairs = _mutual_ratio_matches(feat_a.distances(feat_b), 64, 0.8)
    if len(pairs) < max(3, params.min_inliers):
        return False, None
    ia, ib = np.array(pairs).T
    corr = np.stack([feat_a.xy[ia], feat_b.xy[ib]], axis=1)
    rng = Rng(derive_seed(params.seed, id_a, id_b))
    fit = ransac_affine(corr, params.iters, params.tol_px, rng)
    if fit is None:
        return False, None
    return plausible(fit, params.min_inliers, params.min_ratio), fit


def find_assertions(corpus: dict, filt=None, params: NearDupParams = NearDupParams()):
    """Cluster ``{image_id: RasterImage}`` into assertions; also returns the verified pairs."""
    feats = {i: image_features(img, params) for i, img in corpus.items()}
    verified = []
    for a, b in candidate_pairs(corpus, filt):
        ok, _ = verify_pair(a, feats[a], b, feats[b], params)
        if ok:
            verified.append((a, b))
    log.info("%d images, %d verified near-duplicate pairs", len(corpus), len(verified))
    return cluster_assertions(verified, corpus), verified


def save_assertions(assertions, path) -> None:
    with open(path, "w") as fh:
        for a in sorted(assertions, key=lambda a: a.assertion_id):
            fh.write(json.dumps(a.to_json()) + "\n")


def load_assertions(path) -> list[VisualAssertion]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                out.append(VisualAssertion(int(rec["assertion_id"]),
                                           frozenset(str(i) for i in rec["image_ids"])))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise NearDupError(f"{path}: line {lineno}: malformed assertion record ({exc})") from exc
    return out


def load_corpus(directory) -> dict:
    """Every ``.pgm``/``.ppm`` file in a directory, keyed by file stem."""
    from .imgcore import load_image

    paths = sorted(p for p in Path(directory).iterdir() if p.suffix.lower() in (".pgm", ".ppm"))
    return {p.stem: load_image(p) for p in paths}
