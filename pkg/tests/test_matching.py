import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from telewide.matching import (box_aggregate, build_cost_volume, build_telewide_cost_volume,
                               census_transform)
from telewide.types import CostVolume, Rect


def test_census_constant_is_zero():
    assert np.all(census_transform(np.full((6, 7), 0.4), 5).codes == 0)


def test_census_bright_center_sets_all_bits():
    img = np.zeros((3, 3))
    img[1, 1] = 1.0
    cp = census_transform(img, 3)
    assert cp.nbits == 8
    assert int(cp.codes[1, 1]) == 0xFF


def test_census_rejects_even_window():
    with pytest.raises(ValueError):
        census_transform(np.zeros((4, 4)), 4)


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, (6, 8), elements=st.floats(0, 1)), st.sampled_from([3, 5, 7]))
def test_census_popcount_bound(img, win):
    cp = census_transform(img, win)
    assert cp.nbits == win * win - 1
    assert np.bitwise_count(cp.codes).max() <= win * win - 1


def _shifted_pair(shift, shape=(12, 20), seed=0):
    left = np.random.default_rng(seed).random(shape)
    right = np.zeros_like(left)
    right[:, :-shift] = left[:, shift:]
    return left, right


def test_sad_exact_shift_zero_cost():
    left, right = _shifted_pair(3)
    cv = build_cost_volume(left, right, 6, "sad", win=1)
    assert np.all(cv.costs[3, :, 3:] == 0)
    # with a window the match stays exact once the window clears the border
    cv5 = build_cost_volume(left, right, 6, "sad", win=5)
    assert np.all(cv5.costs[3, :, 5:] < 1e-12)


def test_constant_images_zero_cost_in_bounds():
    img = np.full((5, 9), 0.3)
    cv = build_cost_volume(img, img, 4, "sad", win=3)
    for d in range(4):
        assert np.all(cv.costs[d, :, d:] < 1e-12)
        assert np.all(cv.costs[d, :, :d] == cv.sentinel)
    cv = build_cost_volume(img, img, 4, "census", win=3)
    for d in range(4):
        assert np.all(cv.costs[d, :, d:] == 0)


def test_sentinels():
    img = np.random.default_rng(1).random((4, 6))
    assert build_cost_volume(img, img, 2, "sad", win=3).sentinel == 9
    assert build_cost_volume(img, img, 2, "census", win=5).sentinel == 24


def test_dmax_out_of_range():
    img = np.zeros((4, 6))
    with pytest.raises(ValueError):
        build_cost_volume(img, img, 6)
    with pytest.raises(ValueError):
        build_cost_volume(img, img, 0)


def test_valid_right_rect_rule():
    rng = np.random.default_rng(2)
    left, right = rng.random((10, 16)), rng.random((10, 16))
    rect = Rect(3, 5, 4, 6)
    dmax = 4
    cv = build_cost_volume(left, right, dmax, "census", 3, valid_right=rect)
    for y in range(10):
        for x in range(16):
            reachable = any(rect.row0 <= y < rect.row0 + rect.height
                            and rect.col0 <= x - d < rect.col0 + rect.width
                            for d in range(dmax))
            assert cv.valid[y, x] == reachable
            if not reachable:
                assert np.all(cv.costs[:, y, x] == cv.sentinel)


def test_telewide_volume_invalidates_surround():
    rng = np.random.default_rng(3)
    left, right = rng.random((12, 16)), rng.random((12, 16))
    rect = Rect(3, 4, 6, 8)
    cv = build_telewide_cost_volume(left, right, rect, 5)
    np.testing.assert_array_equal(cv.valid, rect.mask((12, 16)))
    assert np.all(cv.costs[:, ~rect.mask((12, 16))] == cv.sentinel)


def test_costs_finite_nonnegative():
    rng = np.random.default_rng(4)
    cv = build_cost_volume(rng.random((9, 15)), rng.random((9, 15)), 5, "sad", 3)
    assert np.all(np.isfinite(cv.costs)) and np.all(cv.costs >= 0)


def test_sad_matches_brute_force_and_is_pair_symmetric():
    rng = np.random.default_rng(5)
    a, b = rng.random((5, 9)), rng.random((5, 9))
    D = 3
    cv = build_cost_volume(a, b, D, "sad", win=1)
    # brute force double loop
    for d in range(D):
        for y in range(5):
            for x in range(d, 9):
                assert cv.costs[d, y, x] == pytest.approx(abs(a[y, x] - b[y, x - d]))
    # swapped roles, disparity direction reversed (mirror columns)
    cv_sw = build_cost_volume(b[:, ::-1], a[:, ::-1], D, "sad", win=1)
    for d in range(D):
        for y in range(5):
            for x in range(d, 9):
                # left a(y,x) vs right b(y,x-d)  <->  mirrored: b'(y,W-1-(x-d)) vs a'(y,W-1-x)
                xm = 8 - (x - d)
                assert cv_sw.costs[d, y, xm] == pytest.approx(cv.costs[d, y, x])


@settings(max_examples=20, deadline=None)
@given(arrays(np.int64, (7, 12), elements=st.integers(0, 64)), st.integers(0, 2**31 - 1))
def test_census_invariant_to_monotone_remap(levels, seed):
    # intensities on a coarse grid so the remap stays strictly monotone in floating point
    img = levels / 64.0
    other = np.random.default_rng(seed).integers(0, 65, img.shape) / 64.0
    remap = lambda v: v ** 3 * 0.5 + 0.1  # strictly increasing on [0, 1]
    cv1 = build_cost_volume(img, other, 4, "census", 5)
    cv2 = build_cost_volume(remap(img), remap(other), 4, "census", 5)
    np.testing.assert_array_equal(cv1.costs, cv2.costs)


def test_translation_equivariance():
    rng = np.random.default_rng(6)
    left, right = rng.random((10, 30)), rng.random((10, 30))
    k = 4
    cv = build_cost_volume(left, right, 5, "census", 5)
    cvs = build_cost_volume(np.roll(left, k, axis=1), np.roll(right, k, axis=1), 5, "census", 5)
    # interior: away from borders and from the wrap-around seam
    lo, hi = 5 + 2 + k, 30 - 2
    np.testing.assert_array_equal(cvs.costs[:, :, lo:hi], cv.costs[:, :, lo - k:hi - k])


def _plain_cv(costs):
    costs = np.asarray(costs, dtype=float)
    return CostVolume(costs, np.ones(costs.shape[1:], bool), 100.0)


def test_box_radius_zero_identity():
    cv = _plain_cv(np.random.default_rng(7).random((3, 4, 5)))
    np.testing.assert_array_equal(box_aggregate(cv, 0).costs, cv.costs)


def test_box_constant_unchanged():
    cv = _plain_cv(np.full((2, 5, 6), 1.7))
    np.testing.assert_allclose(box_aggregate(cv, 2).costs, 1.7, rtol=1e-12)


def test_box_windowed_mean_oracle():
    # direct windowed mean with edge replication: [0,3,0] -> [1,1,1]
    row = np.array([0.0, 3.0, 0.0])
    padded = np.concatenate([[row[0]], row, [row[-1]]])
    oracle = np.array([padded[i:i + 3].mean() for i in range(3)])
    np.testing.assert_allclose(oracle, [1, 1, 1])
    out = box_aggregate(_plain_cv(row[None, None, :]), 1)
    np.testing.assert_allclose(out.costs[0, 0], oracle, atol=1e-12)


def test_box_excludes_unsupported_entries():
    left = np.random.default_rng(8).random((6, 10))
    cv = build_cost_volume(left, left, 3, "sad", win=1)
    out = box_aggregate(cv, 1)
    assert np.all(out.costs[~cv.support] == cv.sentinel)
    # supported entries average real costs only: identical images -> zero at d=0
    assert np.all(out.costs[0] < 1e-12)
