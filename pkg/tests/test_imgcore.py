import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ideoprop.imgcore import (ImageTooSmallError, Keypoint, MalformedImageError, RasterImage,
                              UnreadableImageError, UnsupportedFormatError, decode_pnm, describe,
                              detect_keypoints, extract, hamming, hamming_matrix, load_image,
                              save_pgm, segment_test)
from ideoprop.imgcore._pattern_table import PATTERN
from ideoprop.imgcore.features import describable, harris_at, harris_response, orientation
from ideoprop.imgcore.pattern import PATCH_RADIUS, generate_pattern
from ideoprop.imgcore.resample import normalize_size, resize
from ideoprop.synthlab.images import draw_base
from ideoprop.numkit import Rng


def pgm(w, h, payload, maxval=255, comment=b""):
    return b"P5\n" + comment + f"{w} {h}\n{maxval}\n".encode() + bytes(payload)


def square_fixture():
    a = np.zeros((64, 64), np.uint8)
    a[20:44, 20:44] = 255
    return RasterImage(a)


def textured(seed=5, side=256):
    return draw_base(Rng(seed), side)


# decoding

def test_p5_identity_decode():
    img = decode_pnm(pgm(2, 2, [0, 255, 128, 64]))
    assert img.luma.tolist() == [[0, 255], [128, 64]]


def test_p6_red_pixel_luma():
    img = decode_pnm(b"P6\n1 1\n255\n" + bytes([255, 0, 0]))
    assert img.luma[0, 0] == round(0.299 * 255) == 76


def test_header_comments_are_skipped():
    img = decode_pnm(pgm(1, 1, [9], comment=b"# made by hand\n"))
    assert img.luma[0, 0] == 9


def test_truncated_payload_is_malformed():
    with pytest.raises(MalformedImageError):
        decode_pnm(pgm(2, 2, [1, 2, 3]))


def test_unsupported_magic():
    with pytest.raises(UnsupportedFormatError):
        decode_pnm(b"P2\n1 1\n255\n7\n")


def test_wrong_maxval_is_rejected():
    with pytest.raises(ImageError_types()):
        decode_pnm(pgm(1, 1, [1], maxval=65535))


def ImageError_types():
    return (MalformedImageError, UnsupportedFormatError)


def test_missing_file_is_unreadable(tmp_path):
    with pytest.raises(UnreadableImageError):
        load_image(tmp_path / "nope.pgm")


def test_error_kinds_are_distinct():
    kinds = {UnreadableImageError, MalformedImageError, UnsupportedFormatError}
    assert len(kinds) == 3 and not any(issubclass(a, b) for a in kinds for b in kinds if a is not b)


def test_save_load_roundtrip(tmp_path):
    img = textured(1, 40)
    save_pgm(img, tmp_path / "x.pgm")
    assert load_image(tmp_path / "x.pgm") == img


@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**31))
def test_decode_arbitrary_p5(w, h, seed):
    data = np.random.default_rng(seed).integers(0, 256, w * h).astype(np.uint8)
    assert np.array_equal(decode_pnm(pgm(w, h, data)).luma.ravel(), data)


# detection

def test_constant_image_has_no_keypoints():
    assert detect_keypoints(RasterImage(np.full((64, 64), 128, np.uint8))) == []


def test_square_corners_found():
    kps = detect_keypoints(square_fixture())
    assert len(kps) >= 4
    corners = np.array([(20, 20), (43, 20), (20, 43), (43, 43)])
    for k in kps:
        assert np.min(np.hypot(corners[:, 0] - k.x, corners[:, 1] - k.y)) <= 2


def test_threshold_monotonicity():
    img = textured(2)
    assert len(detect_keypoints(img, 40, 10_000)) <= len(detect_keypoints(img, 20, 10_000))


def test_too_small_image():
    with pytest.raises(ImageTooSmallError):
        detect_keypoints(RasterImage(np.zeros((31, 64), np.uint8)))


@pytest.mark.parametrize("t", [4, 101])
def test_threshold_range(t):
    with pytest.raises(ValueError):
        detect_keypoints(square_fixture(), t)


def test_every_keypoint_passes_segment_test():
    img = textured(3)
    kps = detect_keypoints(img, 20, 500)
    assert kps and all(segment_test(img, int(k.x), int(k.y), 20) for k in kps)


def test_keypoints_ranked_and_truncated():
    img = textured(4)
    kps = detect_keypoints(img, 20, 50)
    assert len(kps) == 50
    r = [k.response for k in kps]
    assert r == sorted(r, reverse=True)
    assert all(0 <= k.x < img.width and 0 <= k.y < img.height for k in kps)
    assert all(0 <= k.angle < 2 * np.pi for k in kps)


def test_harris_at_points_matches_full_map():
    img = textured(6, 96)
    ys, xs = np.mgrid[3:93:7, 3:93:5]
    full = harris_response(img)
    assert np.allclose(harris_at(img, xs.ravel(), ys.ravel()), full[ys, xs].ravel(), rtol=1e-10, atol=1e-6)


def test_orientation_points_toward_bright_side():
    a = np.zeros((64, 64), np.uint8)
    a[:, 32:] = 200  # bright to the right of the centre
    assert orientation(RasterImage(a), 31, 32) == pytest.approx(0.0, abs=1e-9)
    a = np.zeros((64, 64), np.uint8)
    a[40:, :] = 200  # bright below (image y grows downward)
    assert orientation(RasterImage(a), 32, 32) == pytest.approx(np.pi / 2, abs=1e-9)


# descriptors

def test_pattern_table_matches_generator():
    assert np.array_equal(np.array(PATTERN), generate_pattern())


def test_pattern_inside_disc_and_distinct():
    p = np.array(PATTERN)
    assert p.shape == (256, 4)
    assert np.all(p[:, 0] ** 2 + p[:, 1] ** 2 <= PATCH_RADIUS ** 2)
    assert np.all(p[:, 2] ** 2 + p[:, 3] ** 2 <= PATCH_RADIUS ** 2)
    assert not np.any(np.all(p[:, :2] == p[:, 2:], axis=1))


def test_describe_deterministic_and_256_bits():
    img = textured(7)
    kp = [k for k in detect_keypoints(img) if describable(img, k)][0]
    d1, d2 = describe(img, kp), describe(img, kp)
    assert d1.dtype == np.uint8 and d1.shape == (32,)
    assert np.array_equal(d1, d2)


def test_rotation_steering():
    img = normalize_size(textured(8), 256)
    rot = RasterImage(np.ascontiguousarray(np.rot90(img.luma)))  # counter-clockwise
    kps = [k for k in detect_keypoints(img, 20, 500) if describable(img, k)]
    rkps = detect_keypoints(rot, 20, 2000)
    rxy = np.array([(k.x, k.y) for k in rkps])
    dists = []
    for k in kps[:40]:
        # (x, y) -> (y, W - 1 - x) under a counter-clockwise quarter turn
        tx, ty = k.y, img.width - 1 - k.x
        j = int(np.argmin(np.hypot(rxy[:, 0] - tx, rxy[:, 1] - ty)))
        if np.hypot(rxy[j, 0] - tx, rxy[j, 1] - ty) < 0.5 and describable(rot, rkps[j]):
            dists.append(hamming(describe(img, k), describe(rot, rkps[j])))
    assert len(dists) >= 10
    assert np.median(dists) <= 60


def test_random_patches_near_half_distance():
    g = np.random.default_rng(11)
    out = []
    for _ in range(20):
        a = RasterImage(g.integers(0, 256, (64, 64)).astype(np.uint8))
        b = RasterImage(g.integers(0, 256, (64, 64)).astype(np.uint8))
        kp = Keypoint(32.0, 32.0, 0.0, float(g.uniform(0, 2 * np.pi)))
        out.append(hamming(describe(a, kp), describe(b, kp)))
    outside = [d for d in out if not 96 <= d <= 160]
    assert not outside, f"distances outside [96, 160]: {outside} of {out}"


@given(st.integers(0, 2**31))
def test_hamming_is_symmetric_with_identity(seed):
    g = np.random.default_rng(seed)
    a, b = g.integers(0, 256, (3, 32)).astype(np.uint8), g.integers(0, 256, (4, 32)).astype(np.uint8)
    d = hamming_matrix(a, b)
    assert np.array_equal(d, hamming_matrix(b, a).T)
    assert np.all(np.diag(hamming_matrix(a, a)) == 0)
    assert d[1, 2] == hamming(a[1], b[2])


def test_extract_is_pure():
    img = textured(9)
    k1, d1 = extract(img)
    k2, d2 = extract(img)
    assert k1 == k2 and np.array_equal(d1, d2)
    assert all(describable(img, k) for k in k1)


# resampling

def test_normalize_size_long_side():
    img = RasterImage(np.zeros((100, 200), np.uint8))
    out = normalize_size(img, 512)
    assert (out.width, out.height) == (512, 256)


def test_resize_constant_stays_constant():
    img = RasterImage(np.full((37, 53), 77, np.uint8))
    for w, h in [(10, 10), (100, 80)]:
        assert np.all(resize(img, w, h).luma == 77)
