from .features import (Keypoint, describe, describe_many, detect_keypoints, extract, hamming,
                       hamming_matrix, orientation, orientations, segment_test)
from .pnm import (ImageError, ImageTooSmallError, MalformedImageError, RasterImage,
                  UnreadableImageError, UnsupportedFormatError, decode_pnm, load_image, save_pgm)
from .resample import normalize_size, resize

__all__ = [
    "Keypoint", "describe", "describe_many", "detect_keypoints", "extract", "hamming",
    "hamming_matrix", "orientation", "segment_test", "ImageError", "ImageTooSmallError",
    "MalformedImageError", "RasterImage", "UnreadableImageError", "UnsupportedFormatError",
    "decode_pnm", "load_image", "save_pgm", "normalize_size", "resize",
]
