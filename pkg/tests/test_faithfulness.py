# -*- coding: utf-8 -*-
# ==============================================================================
# MIT License
#
# Copyright (c) 2026 Attribution Audit developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
# ==============================================================================

import numpy as np
import pytest

from libs.common import ConfigError, MetricError, ShapeError
from libs.tensor import LayerSpec, predict, softmax
from libs.attribution import compute_attribution
from libs.utils import TaskPool
from libs.faithfulness import ScoreMode, OcclusionConfig, CURVE_COLUMNS, AUC_COLUMNS, MEAN_IMAGE
from libs.faithfulness import blur_image, grid_regions, rank_regions, run_occlusion, region_drops, region_correlation
from libs.faithfulness import FailedCurve, faithfulness_suite

from tests.shared import chain, bars, conv_plain


def image_model(weight: np.ndarray, bias=(0.0, 0.0)):
    """ logit 0 reads the image through `weight`, logit 1 is constant """
    size = weight.size
    full = np.zeros((2, size))
    full[0] = weight.ravel()
    layers = [('flatten', LayerSpec.flatten()), ('fc', LayerSpec.dense(size, 2))]
    params = {'fc.weight': full, 'fc.bias': np.asarray(bias, dtype=np.float64)}
    return chain(layers=layers, params=params, input_shape=(1, ) + weight.shape)


#
#   Blur and regions
#

def test_blur_keeps_constant_interior():
    x = np.full((1, 8, 8), 0.5)
    blurred = blur_image(x, kernel=3)
    np.testing.assert_allclose(blurred[0, 1:-1, 1:-1], 0.5)
    assert blurred[0, 0, 0] == pytest.approx(0.5 * 4 / 9)


def test_blur_spreads_a_single_pixel():
    x = np.zeros((1, 7, 7))
    x[0, 3, 3] = 0.9
    blurred = blur_image(x, kernel=3)
    expected = np.zeros((7, 7))
    expected[2:5, 2:5] = 0.1
    np.testing.assert_allclose(blurred[0], expected, atol=1e-15)


def test_blur_errors_and_identity():
    x = np.random.default_rng(0).uniform(size=(2, 5, 5))
    np.testing.assert_array_equal(blur_image(x, kernel=1), x)
    with pytest.raises(ConfigError):
        blur_image(x, kernel=4)
    with pytest.raises(ShapeError):
        blur_image(x[0], kernel=3)


def test_grid_excludes_partial_cells():
    regions, excluded = grid_regions(np.zeros((10, 10)), patch=4)
    assert len(regions) == 4
    assert excluded == 5
    assert [(r.top, r.left) for r in regions] == [(0, 0), (0, 4), (4, 0), (4, 4)]
    with pytest.raises(ShapeError):
        grid_regions(np.zeros((3, 3)), patch=4)


def test_uniform_map_ranks_row_major():
    assert [r.index for r in rank_regions(np.ones((8, 8)), patch=2)] == list(range(16))


def test_hot_region_ranks_first():
    amap = np.zeros((1, 8, 8))
    amap[0, 4:6, 2:4] = 5.0
    assert rank_regions(amap, patch=2)[0].index == 2 * 4 + 1


def test_ranking_is_descending():
    amap = np.random.default_rng(1).standard_normal((12, 12))
    ranked = rank_regions(amap, patch=3)
    means = [r.mean for r in ranked]
    assert all(means[0] >= m for m in means)
    assert means == sorted(means, reverse=True)


#
#   Occlusion curves
#

def test_constant_model_gives_flat_curve():
    model = image_model(np.zeros((8, 8)), bias=(1.0, 0.0))
    x = np.random.default_rng(2).uniform(size=(1, 8, 8))
    amap = np.random.default_rng(3).standard_normal((8, 8))
    curve = run_occlusion(model, x, amap, OcclusionConfig(blur=3, patch=2, steps=10))
    assert len(curve.scores) == 11
    assert len(set(curve.scores)) == 1
    assert curve.auc == pytest.approx(curve.scores[0])


def test_curve_starts_at_clean_score():
    model = conv_plain(seed=4)
    x = bars(n=1).images[0]
    amap = np.random.default_rng(4).standard_normal((16, 16))
    curve = run_occlusion(model, x, amap, OcclusionConfig(blur=3, patch=4, steps=16), method='noise', image_id=7)
    probs = softmax(predict(model, x[np.newaxis]))[0]
    assert curve.target == int(np.argmax(probs))
    assert curve.scores[0] == probs[curve.target]
    assert all(0.0 <= s <= 1.0 for s in curve.scores)
    assert sorted(curve.order) == list(range(16))
    assert (curve.method, curve.image_id) == ('noise', 7)


def test_logit_score_mode():
    weight = np.zeros((8, 8))
    weight[:4, 4:] = 1.0
    model = image_model(weight)
    x = np.full((1, 8, 8), 0.8)
    curve = run_occlusion(model, x, weight, OcclusionConfig(blur=3, patch=4, steps=4, score=ScoreMode.LOGIT))
    assert curve.scores[0] == pytest.approx(16 * 0.8)


def test_single_region_model():
    weight = np.zeros((8, 8))
    weight[:4, 4:] = np.random.default_rng(5).uniform(0.5, 1.0, size=(4, 4))
    model = image_model(weight)
    x = np.full((1, 8, 8), 0.8)
    config = OcclusionConfig(blur=3, patch=4, steps=4)
    curve = run_occlusion(model, x, weight[np.newaxis], config)
    assert curve.order[0] == 1
    drops = region_drops(model, x, patch=4, blur=3)
    assert int(np.argmax(drops)) == 1
    assert drops[1] > 0.0
    np.testing.assert_array_equal(drops[[0, 2, 3]], 0.0)
    # every later step leaves region 1 occluded
    assert len(set(curve.scores[1:])) == 1
    assert region_correlation(model, x, weight, config, drops=drops) == pytest.approx(1.0)


def test_region_correlation_is_nan_for_flat_maps():
    model = image_model(np.ones((8, 8)))
    x = np.full((1, 8, 8), 0.5)
    assert np.isnan(region_correlation(model, x, np.ones((8, 8)), OcclusionConfig(blur=3, patch=4, steps=4)))


def test_occlusion_config_errors():
    with pytest.raises(ConfigError):
        OcclusionConfig(blur=4)
    with pytest.raises(ConfigError):
        OcclusionConfig(steps=0)
    with pytest.raises(ConfigError):
        OcclusionConfig(score='rank')
    model = image_model(np.ones((8, 8)))
    with pytest.raises(ConfigError):
        run_occlusion(model, np.zeros((1, 8, 8)), np.ones((8, 8)), OcclusionConfig(blur=3, patch=4, steps=5))


#
#   Suite
#

def test_suite_rows():
    model = conv_plain(seed=1)
    config = OcclusionConfig(blur=3, patch=4, steps=6)
    result = faithfulness_suite({'plain': model}, ['gradient'], bars(n=1), config)
    curves = result.curve_rows()
    assert len(curves) == 7
    assert len(curves[0]) == len(CURVE_COLUMNS)
    assert curves[0][:6] == ('plain', 'gradient', 4, 3, 0, 0)
    aucs = result.auc_rows()
    assert len(aucs) == 2
    assert len(aucs[0]) == len(AUC_COLUMNS)
    assert aucs[1][5] == MEAN_IMAGE
    assert aucs[1][6] == pytest.approx(aucs[0][6])


def test_duplicate_methods_give_identical_rows():
    model = conv_plain(seed=2)
    config = OcclusionConfig(blur=3, patch=4, steps=5)
    result = faithfulness_suite({'plain': model}, ['smoothgrad', 'smoothgrad'], bars(n=2), config,
                                pool=TaskPool(threads=3))
    rows = result.curve_rows()
    half = len(rows) // 2
    assert rows[:half] == rows[half:]


def test_suite_is_deterministic():
    model = conv_plain(seed=3)
    config = OcclusionConfig(blur=3, patch=4, steps=5)

    def run():
        return faithfulness_suite({'plain': model}, ['random', 'lrp-gamma'], bars(n=2), config, seeds=(0, 1))

    a = run()
    b = run()
    assert a.curve_rows() == b.curve_rows()
    assert a.mean_auc('plain', 'random', 1) == b.mean_auc('plain', 'random', 1)


def test_failed_curve_is_reported_and_the_rest_kept(monkeypatch):
    model = conv_plain(seed=4)
    data = bars(n=2)
    config = OcclusionConfig(blur=3, patch=4, steps=5)
    attribute = compute_attribution

    def flaky(name, model, x, target, seed, options):
        if name == 'gradient' and np.array_equal(x, data.images[1]):
            raise MetricError('all-zero map')
        return attribute(name=name, model=model, x=x, target=target, seed=seed, options=options)

    monkeypatch.setattr('libs.faithfulness.suite.compute_attribution', flaky)
    result = faithfulness_suite({'plain': model}, ['gradient', 'random'], data, config, pool=TaskPool(threads=2))
    assert result.failed == (FailedCurve(model='plain', method='gradient', seed=0, image=1, reason='all-zero map'), )
    assert str(result.failed[0]) == 'plain gradient seed=0 image=1: all-zero map'
    assert len(result.curve_rows()) == 3 * 6
    aucs = result.auc_rows()
    # three image rows plus one mean row per (method, seed)
    assert len(aucs) == 3 + 2
    gradient = [row for row in aucs if row[1] == 'gradient']
    assert [row[5] for row in gradient] == [0, MEAN_IMAGE]
    assert gradient[1][6] == pytest.approx(gradient[0][6])


def test_config_errors_still_stop_the_suite(monkeypatch):
    def broken(**kwargs):
        raise ConfigError('bad options')

    monkeypatch.setattr('libs.faithfulness.suite.compute_attribution', broken)
    with pytest.raises(ConfigError):
        faithfulness_suite({'plain': conv_plain(seed=4)}, ['gradient'], bars(n=1),
                           OcclusionConfig(blur=3, patch=4, steps=5))
