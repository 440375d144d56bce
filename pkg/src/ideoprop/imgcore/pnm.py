"""Binary PGM (P5) and PPM (P6) reading and writing, maxval 255 only."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np


class ImageError(ValueError):
    pass


class UnreadableImageError(ImageError):
    pass


class MalformedImageError(ImageError):
    pass


class UnsupportedFormatError(ImageError):
    pass


class ImageTooSmallError(ImageError):
    pass


@dataclass(frozen=True, eq=False)
class RasterImage:
    luma: np.ndarray  # uint8, shape (height, width)

    def __post_init__(self):
        if self.luma.ndim != 2 or self.luma.dtype != np.uint8:
            raise ValueError("luma must be a 2-D uint8 array")

    @property
    def width(self) -> int:
        return self.luma.shape[1]

    @property
    def height(self) -> int:
        return self.luma.shape[0]

    @cached_property
    def pixels(self) -> np.ndarray:
        return self.luma.astype(np.float64)

    def __eq__(self, other):
        return isinstance(other, RasterImage) and np.array_equal(self.luma, other.luma)

    __hash__ = None


def _tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping ``#`` comments."""
    toks, i, n = [], 0, len(data)
    while len(toks) < count:
        while i < n and data[i:i + 1].isspace():
            i += 1
        if i < n and data[i:i + 1] == b"#":
            while i < n and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        start = i
        while i < n and not data[i:i + 1].isspace() and data[i:i + 1] != b"#":
            i += 1
        if start == i:
            raise MalformedImageError("header ended early")
        toks.append(data[start:i])
    if i >= n or not data[i:i + 1].isspace():
        raise MalformedImageError("missing whitespace after header")
    return toks, i + 1


def decode_pnm(data: bytes) -> RasterImage:
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise UnsupportedFormatError(f"unsupported magic number {magic!r}; expected P5 or P6")
    toks, offset = _tokens(data[2:], 3)
    try:
        width, height, maxval = (int(t) for t in toks)
    except ValueError as exc:
        raise MalformedImageError(f"non-numeric header field in {toks}") from exc
    if width <= 0 or height <= 0:
        raise MalformedImageError(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedFormatError(f"maxval {maxval} not supported; expected 255")
    channels = 1 if magic == b"P5" else 3
    need = width * height * channels
    payload = data[2 + offset:2 + offset + need]
    if len(payload) < need:
        raise MalformedImageError(f"payload truncated: {len(payload)} of {need} bytes")
    arr = np.frombuffer(payload, dtype=np.uint8)
    if channels == 1:
        return RasterImage(arr.reshape(height, width).copy())
    rgb = arr.reshape(height, width, 3).astype(np.float64)
    y = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    return RasterImage(np.clip(np.floor(y + 0.5), 0, 255).astype(np.uint8))


def load_image(path) -> RasterImage:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UnreadableImageError(f"cannot read {path}: {exc}") from exc
    try:
        return decode_pnm(data)
    except ImageError as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def encode_pgm(img: RasterImage) -> bytes:
    return f"P5\n{img.width} {img.height}\n255\n".encode() + img.luma.tobytes()


def save_pgm(img: RasterImage, path) -> None:
    Path(path).write_bytes(encode_pgm(img))
