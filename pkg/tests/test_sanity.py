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

import math

import numpy as np
import pytest

from libs.common import ConfigError
from libs.attribution import Method, lrp_config_for
from libs.metrics import MetricId, DEFAULT_C2
from libs.utils import TaskPool
from libs.zoo import RandomizationPlan, default_plan, plan_for_nodes
from libs.sanity import SANITY_COLUMNS, ALL_SEEDS, SanityRunConfig, SanityHarness, run_sanity, method_seed
from libs.sanity import logit_correlation, skip_component_stability, irrelevance_overlap

from tests.shared import bars, conv_plain, conv_residual


def empty_plan() -> RandomizationPlan:
    return RandomizationPlan(groups=((), ), seed=0)


def rows_equal(a, b) -> bool:
    if len(a) != len(b):
        return False
    for x, y in zip(a, b):
        for u, v in zip(x.cells(), y.cells()):
            if isinstance(u, float) and math.isnan(u):
                if not (isinstance(v, float) and math.isnan(v)):
                    return False
            elif u != v:
                return False
    return True


def test_untouched_stage_gives_identity_values():
    model = conv_plain(seed=1)
    config = SanityRunConfig(model=model, dataset=bars(n=3), methods=('gradient', 'smoothgrad', 'lrp-0'),
                             plan=empty_plan(), metrics=(MetricId.SSIM, MetricId.SPEARMAN, MetricId.MSE_NORMALIZED),
                             seeds=(0, 1))
    result = run_sanity(config)
    assert len(result.flagged) == 0
    for row in result.rows:
        assert row.n_images in (3, 6)
        assert row.mean == pytest.approx(MetricId.IDENTITY[row.metric], abs=1e-9)


def test_rows_cover_the_grid():
    model = conv_plain(seed=2)
    plan = default_plan(model, seed=4)
    config = SanityRunConfig(model=model, dataset=bars(n=2), methods=('gradient', 'random'), plan=plan,
                             metrics=(MetricId.SSIM, MetricId.MSE_NORMALIZED), seeds=(0, 1, 2), model_name='plain')
    result = run_sanity(config)
    assert len(result.rows) == 2 * plan.stages * 2 * (3 + 1)
    assert len(result.rows[0].cells()) == len(SANITY_COLUMNS)
    row = result.select('gradient', 2, MetricId.SSIM)
    assert row.seed == ALL_SEEDS
    assert row.model == 'plain'
    assert row.n_images == 6
    seeds = [result.select('gradient', 2, MetricId.SSIM, seed=s).mean for s in (0, 1, 2)]
    assert row.mean == pytest.approx(np.mean(seeds))
    assert row.std == pytest.approx(np.std(seeds))
    for row in result.rows:
        if row.metric == MetricId.SSIM:
            assert -1.0 <= row.mean <= 1.0
        else:
            assert row.mean >= 0.0


def test_run_is_deterministic_and_thread_safe():
    model = conv_residual(seed=3)

    def config():
        return SanityRunConfig(model=model, dataset=bars(n=2, seed=3), methods=('smoothgrad', 'lrp-gamma', 'random'),
                               plan=default_plan(model, seed=9), metrics=(MetricId.SSIM, MetricId.SPEARMAN),
                               seeds=(0, 1), stages=(0, 2))

    a = run_sanity(config())
    b = run_sanity(config())
    c = run_sanity(config(), pool=TaskPool(threads=4))
    assert rows_equal(a.rows, b.rows)
    assert rows_equal(a.rows, c.rows)


def test_random_maps_track_the_covariance_bound():
    model = conv_plain(seed=0, size=32)
    config = SanityRunConfig(model=model, dataset=bars(n=16, size=32), methods=(Method.RANDOM, ),
                             plan=default_plan(model, seed=1), metrics=(MetricId.SSIM_GLOBAL, ),
                             seeds=(0, 1, 2, 3), stages=(0, ))
    row = run_sanity(config).select(Method.RANDOM, 0, MetricId.SSIM_GLOBAL)
    assert row.n_images == 64
    assert abs(row.mean) <= DEFAULT_C2 / (2.0 + DEFAULT_C2) + 0.02


def test_degenerate_maps_are_flagged():
    model = conv_plain(seed=0)
    model = model.replace(params={'fc2.weight': np.zeros_like(model.param('fc2.weight'))})
    config = SanityRunConfig(model=model, dataset=bars(n=2), methods=('gradient', ), plan=default_plan(model, 0),
                             metrics=(MetricId.SSIM, ), seeds=(0, ), stages=(1, ))
    result = run_sanity(config)
    assert len(result.flagged) == 2
    assert all(cell.stage == 1 and cell.method == 'gradient' for cell in result.flagged)
    row = result.select('gradient', 1, MetricId.SSIM, seed=0)
    assert row.n_images == 0
    assert math.isnan(row.mean)


def test_method_seeds():
    assert method_seed(1, 'smoothgrad', 3) == method_seed(1, 'smoothgrad', 3, run_seed=0, stage=2)
    assert method_seed(1, 'random', 3) != method_seed(1, 'random', 3, run_seed=0, stage=2)
    assert method_seed(1, 'random', 3, run_seed=0, stage=1) != method_seed(1, 'random', 3, run_seed=0, stage=2)


def test_config_errors():
    model = conv_plain()
    plan = default_plan(model, seed=0)
    data = bars(n=2)
    with pytest.raises(ConfigError):
        SanityRunConfig(model=model, dataset=data, methods=(), plan=plan, metrics=('ssim', ), seeds=(0, ))
    with pytest.raises(ConfigError):
        SanityRunConfig(model=model, dataset=data, methods=('deconvnet', ), plan=plan, metrics=('ssim', ), seeds=(0, ))
    with pytest.raises(ConfigError):
        SanityRunConfig(model=model, dataset=data, methods=('gradient', ), plan=plan, metrics=('hog', ), seeds=(0, ))
    with pytest.raises(ConfigError):
        SanityRunConfig(model=model, dataset=data, methods=('gradient', ), plan=plan, metrics=('ssim', ),
                        seeds=(0, ), stages=(plan.stages, ))
    with pytest.raises(ConfigError):
        SanityRunConfig(model=model, dataset=data, methods=('gradient', ), plan=plan, metrics=('ssim', ),
                        seeds=(0, ), mode='bottom-up')


def test_harness_keeps_its_config():
    model = conv_plain()
    config = SanityRunConfig(model=model, dataset=bars(n=1), methods=('gradient', ), plan=empty_plan(),
                             metrics=('ssim', ), seeds=(0, ))
    assert SanityHarness(config).config is config
    assert config.stage_list == (0, )


#
#   Diagnostics
#

def test_logit_correlation_without_change():
    model = conv_plain(seed=5)
    summary = logit_correlation(model, empty_plan(), 0, bars(n=4))
    assert summary.values == (1.0, 1.0, 1.0, 1.0)
    assert summary.flagged == 0


def test_logit_correlation_after_randomization():
    model = conv_plain(seed=5)
    summary = logit_correlation(model, default_plan(model, seed=2), 2, bars(n=6))
    assert len(summary.values) == 6
    assert all(-1.0 <= value <= 1.0 for value in summary.values)


def test_skip_stability_without_change():
    model = conv_residual(seed=2)
    stability = skip_component_stability(model, empty_plan(), 0, bars(n=3), lrp_config_for('lrp-beta-eps'))
    assert stability.skip.mean == pytest.approx(1.0)
    assert stability.weighted.mean == pytest.approx(1.0)


def test_skip_stability_with_silent_weighted_branch():
    model = conv_residual(seed=2)
    model = model.replace(params={'b2_conv2.weight': np.zeros_like(model.param('b2_conv2.weight'))})
    plan = plan_for_nodes(model, [['b2_conv1']], seed=6)
    stability = skip_component_stability(model, plan, 0, bars(n=3), lrp_config_for('lrp-0'))
    assert stability.skip.values == (1.0, 1.0, 1.0)
    assert stability.weighted.flagged == 3
    assert math.isnan(stability.weighted.mean)


def test_irrelevance_overlap_without_change():
    model = conv_plain(seed=1)
    result = irrelevance_overlap(model, empty_plan(), 0, bars(n=3))
    assert result.overlap.mean == 1.0
    assert 0.0 <= result.baseline.mean <= 1.0


def test_irrelevance_overlap_rejects_bad_tau():
    model = conv_plain(seed=1)
    with pytest.raises(ConfigError):
        irrelevance_overlap(model, empty_plan(), 0, bars(n=1), tau=0.0)
