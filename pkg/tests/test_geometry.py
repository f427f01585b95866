import numpy as np
import pytest
from hypothesis import given, strategies as st

from telewide.geometry import (TeleWideGeometry, center_rect, make_tele_pair, make_wide_pair,
                               resample_disparity, resample_image, scale_disparity,
                               tele_to_wide)
from telewide.types import DisparityMap, GeometryError, Rect


@pytest.mark.parametrize("shape, zoom, expected", [
    ((8, 8), 2, Rect(2, 2, 4, 4)),
    ((5, 7), 1, Rect(0, 0, 5, 7)),
    ((375, 1242), 2, Rect(94, 310, 187, 621)),  # floor((1242 - 621) / 2) = 310
])
def test_center_rect(shape, zoom, expected):
    assert center_rect(shape, zoom) == expected


def test_center_rect_rejects_zoom_below_one():
    with pytest.raises(GeometryError):
        center_rect((8, 8), 0.5)


@given(st.integers(1, 300), st.integers(1, 300), st.floats(1.0, 8.0))
def test_center_rect_invariants(H, W, zoom):
    r = center_rect((H, W), zoom)
    assert r.fits((H, W))
    assert r.height == int(np.floor(H / zoom)) and r.width == int(np.floor(W / zoom))
    assert r.row0 == (H - r.height) // 2 and r.col0 == (W - r.width) // 2
    # every pixel is either center or surround
    m = r.mask((H, W))
    assert m.sum() + (~m).sum() == H * W
    assert m.sum() == r.area


def test_wide_pair_dataset_mode():
    geom = TeleWideGeometry(2, (8, 8))
    wide = np.random.default_rng(0).random((8, 8))
    tele = np.random.default_rng(1).random((4, 4)) + 0.1
    left, right, rect = make_wide_pair(wide, tele, geom)
    assert rect == Rect(2, 2, 4, 4)
    np.testing.assert_array_equal(left, wide)
    np.testing.assert_array_equal(right[2:6, 2:6], tele)
    outside = ~rect.mask((8, 8))
    assert np.all(right[outside] == 0)


def test_wide_pair_device_mode_constant():
    geom = TeleWideGeometry(2, (8, 8))
    _, right, _ = make_wide_pair(np.zeros((8, 8)), np.full((8, 8), 0.5), geom)
    expected = np.zeros((8, 8))
    expected[2:6, 2:6] = 0.5
    np.testing.assert_allclose(right, expected, atol=1e-15)


def test_wide_pair_zoom_one_identity():
    geom = TeleWideGeometry(1, (6, 9))
    tele = np.random.default_rng(3).random((6, 9))
    _, right, _ = make_wide_pair(np.zeros((6, 9)), tele, geom)
    np.testing.assert_array_equal(right, tele)


def test_wide_pair_shape_mismatch():
    geom = TeleWideGeometry(2, (8, 8))
    with pytest.raises(GeometryError):
        make_wide_pair(np.zeros((8, 8)), np.zeros((5, 5)), geom)


def test_tele_pair_constant():
    geom = TeleWideGeometry(2, (8, 8))
    left, right = make_tele_pair(np.full((8, 8), 0.3), np.full((4, 4), 0.7), geom)
    assert left.shape == right.shape == (8, 8)
    np.testing.assert_allclose(left, 0.3, atol=1e-15)
    np.testing.assert_allclose(right, 0.7, atol=1e-15)


def test_tele_pair_zoom_one_identity():
    geom = TeleWideGeometry(1, (5, 6))
    rng = np.random.default_rng(4)
    wide, tele = rng.random((5, 6)), rng.random((5, 6))
    left, right = make_tele_pair(wide, tele, geom)
    np.testing.assert_array_equal(left, wide)
    np.testing.assert_array_equal(right, tele)


def test_tele_pair_crop_anchor():
    geom = TeleWideGeometry(2, (8, 8))
    wide = np.zeros((8, 8))
    wide[2, 2] = 1.0
    left, _ = make_tele_pair(wide, np.zeros((4, 4)), geom)
    assert np.unravel_index(np.argmax(left), left.shape) == (0, 0)
    assert left[0, 0] == 1.0
    assert np.all(left[3:, :] == 0) and np.all(left[:, 3:] == 0)


@given(st.floats(0.01, 100), st.floats(0.1, 10))
def test_scale_disparity_round_trip(v, a):
    m = DisparityMap.full((3, 4), v)
    back = scale_disparity(scale_disparity(m, a), 1 / a)
    np.testing.assert_allclose(back.values, m.values, rtol=1e-12)


@pytest.mark.parametrize("v, f, expected", [(10, 2, 20), (7, 0.5, 3.5), (4, 1, 4)])
def test_scale_disparity(v, f, expected):
    out = scale_disparity(DisparityMap.full((2, 2), v), f)
    assert np.all(out.values == expected)


def test_scale_disparity_keeps_mask_and_rejects_nonpositive():
    m = DisparityMap(np.full((2, 2), 3.0), np.array([[1, 0], [0, 1]], bool))
    out = scale_disparity(m, 2)
    np.testing.assert_array_equal(out.valid, m.valid)
    assert out.values[0, 1] == 3.0
    with pytest.raises(GeometryError):
        scale_disparity(m, 0)


def test_resample_constant_and_round_trip():
    c = np.full((2, 2), 0.42)
    up = resample_image(c, (4, 4))
    np.testing.assert_allclose(up, 0.42, atol=1e-15)
    np.testing.assert_allclose(resample_image(up, (2, 2)), c, atol=1e-15)


def test_resample_ramp_monotone():
    ramp = np.array([[0.0, 1.0]])
    up = resample_image(ramp, (1, 4))
    assert np.all(np.diff(up[0]) >= 0)
    assert 0 < up[0, 1] < 1 and 0 < up[0, 2] < 1


def test_resample_disparity_is_nearest_and_mask_aware():
    d = DisparityMap(np.array([[1.0, 9.0]]), np.array([[True, False]]))
    up = resample_disparity(d, (1, 4))
    np.testing.assert_array_equal(up.values, [[1, 1, 9, 9]])
    np.testing.assert_array_equal(up.valid, [[True, True, False, False]])


def test_embed_then_crop_recovers_tele():
    geom = TeleWideGeometry(2, (10, 14))
    tele = np.random.default_rng(5).random((5, 7))
    _, right, rect = make_wide_pair(np.zeros((10, 14)), tele, geom)
    np.testing.assert_array_equal(right[rect.slices], tele)


def test_tele_to_wide_scales_and_embeds():
    geom = TeleWideGeometry(2, (8, 8))
    d = DisparityMap.full((8, 8), 20.0, "tele")
    w = tele_to_wide(d, geom)
    assert np.all(w.values[2:6, 2:6] == 10.0)
    assert w.valid.sum() == 16 and not w.valid[0, 0]
