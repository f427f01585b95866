import numpy as np
import pytest

from telewide.config import PipelineConfig
from telewide.matching import build_telewide_cost_volume
from telewide.metrics import end_point_error, outlier_rate
from telewide.pipeline import estimate, readout, right_disparity, stereo_disparity
from telewide.synth import constant_disparity, gen_rds, slanted_disparity, synth_telewide
from telewide.types import CostVolume, Rect

FAST = PipelineConfig(dmax=16, paths=4)


def test_readout_soft_and_wta():
    costs = np.full((5, 1, 1), 8.0)
    costs[2] = 0.0
    agg = CostVolume(costs * 4, np.ones((1, 1), bool), 100.0)
    assert readout(agg, FAST, soft=False).values[0, 0] == 2
    assert abs(readout(agg, FAST).values[0, 0] - 2) < 1e-3


def test_plain_stereo_constant_rds():
    left, right, gt = gen_rds((48, 96), constant_disparity(6), seed=0)
    d = stereo_disparity(left, right, FAST, soft=False)
    m = gt.valid
    assert np.mean(d.values[m] == 6) > 0.99


def test_right_disparity_on_constant_scene():
    left, right, _ = gen_rds((32, 64), constant_disparity(5), seed=1)
    dr = right_disparity(left, right, 12, FAST)
    assert np.mean(dr.values[:, :50] == 5) > 0.99


@pytest.mark.parametrize("mode", ["tele", "wide"])
def test_estimate_center_accuracy(mode):
    left, right, gt = gen_rds((64, 128), slanted_disparity(2, 9, 128), seed=2)
    wide, tele, gt = synth_telewide(left, right, gt, 2)
    d = estimate(wide, tele, FAST, mode)
    rect = FAST.geometry(wide.shape).rect
    inside = rect.mask(wide.shape)
    assert outlier_rate(d, gt, inside) < 1.0
    assert end_point_error(d, gt, inside) < 0.5
    if mode == "tele":
        np.testing.assert_array_equal(d.valid, inside)
    else:
        assert d.valid.all()


def test_lr_check_repairs_tele_crop_edge():
    left, right, gt = gen_rds((64, 128), constant_disparity(8), seed=3)
    wide, tele, gt = synth_telewide(left, right, gt, 2)
    rect = FAST.geometry(wide.shape).rect
    strip = np.zeros(wide.shape, bool)
    strip[rect.row0:rect.row0 + rect.height, rect.col0:rect.col0 + 8] = True
    raw = estimate(wide, tele, FAST.replace(lr_check=False), "tele")
    fixed = estimate(wide, tele, FAST, "tele")
    assert outlier_rate(raw, gt, strip) > 50
    assert outlier_rate(fixed, gt, strip) == 0


def test_native_tele_resolution():
    left, right, _ = gen_rds((32, 64), constant_disparity(4), seed=4)
    wide, tele, _ = synth_telewide(left, right, None, 2)
    d = estimate(wide, tele, FAST, "tele", embed=False)
    assert d.shape == (32, 64) and d.resolution == "tele"
    assert np.median(d.values) == pytest.approx(8, abs=0.1)


def test_telewide_volume_surround_invalid():
    left, right, _ = gen_rds((32, 64), constant_disparity(4), seed=5)
    rect = Rect(8, 16, 16, 32)
    cv = build_telewide_cost_volume(left, right, rect, 10)
    np.testing.assert_array_equal(cv.valid, rect.mask((32, 64)))


def test_bad_mode():
    with pytest.raises(ValueError):
        estimate(np.zeros((8, 8)), np.zeros((4, 4)), FAST, "zoom")
