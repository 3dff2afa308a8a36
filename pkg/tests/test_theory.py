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

from libs.common import ConfigError, DatasetError, PreconditionError, ShapeError
from libs.tensor import LayerSpec, forward_batch, predict
from libs.utils import TaskPool
from libs.zoo import Dataset, Provenance
from libs.metrics import ssim
from libs.theory import CauchyParams, cauchy_tail, cauchy_cdf
from libs.theory import ActivationSplit, overtaking_probability_mc, overtaking_probability_avg
from libs.theory import Distribution, ssim_mc, spearman_mc, mse_mc, normalization_variance_mc
from libs.theory import QUANTILES, QuantileTable, activation_stats, quantile_overtaking
from libs.theory import Activation, coalition_values, shapley_exact, shapley_values
from libs.theory import PropertyMethod, DominanceRule, count_violations, monotonicity_test, positive_dominance_check
from libs.theory import THEORY_COLUMNS, EXPERIMENTS, experiment_params, run_experiment
from libs.theory import QUANTILE_COLUMNS, GRID_COLUMNS, quantile_rows, fraction_rows, overtaking_grid

from tests.shared import chain, random_mlp, bars, conv_plain


#
#   Cauchy tail
#

def test_cauchy_tail_values():
    assert cauchy_tail(0.0, 1.0) == pytest.approx(0.5)
    assert cauchy_tail(1.0, 1.0) == pytest.approx(0.25)
    assert cauchy_tail(np.sqrt(3.0), 1.0) == pytest.approx(1.0 / 6.0)
    assert cauchy_tail(4.0, 2.0) == pytest.approx(0.5 - np.arctan(2.0) / np.pi)
    assert CauchyParams(gamma=1.0, k=1.0).tail() == pytest.approx(0.25)


def test_cauchy_tail_monotonicity():
    ks = np.linspace(0.1, 10.0, 25)
    tails = [cauchy_tail(k, 1.5) for k in ks]
    assert all(a > b for a, b in zip(tails, tails[1:]))
    gammas = np.linspace(0.1, 5.0, 25)
    tails = [cauchy_tail(2.0, g) for g in gammas]
    assert all(a < b for a, b in zip(tails, tails[1:]))
    assert cauchy_cdf(2.0, 0.7) + cauchy_tail(2.0, 0.7) == pytest.approx(1.0)


def test_cauchy_scale_must_be_positive():
    with pytest.raises(PreconditionError):
        cauchy_tail(1.0, 0.0)
    with pytest.raises(PreconditionError):
        cauchy_cdf(1.0, -1.0)
    with pytest.raises(PreconditionError):
        CauchyParams(gamma=0.0, k=1.0)


#
#   Overtaking
#

def test_split_invariants():
    with pytest.raises(PreconditionError):
        ActivationSplit(large=(1.0, ), small=(1.0, ), k=2.0)
    with pytest.raises(PreconditionError):
        ActivationSplit(large=(2.0, ), small=(-1.0, ), k=1.0)
    with pytest.raises(PreconditionError):
        ActivationSplit(large=(), small=(1.0, ), k=1.0)
    with pytest.raises(PreconditionError):
        ActivationSplit(large=(2.0, ), small=(1.0, ), k=0.5)
    split = ActivationSplit.tight(large=(4.0, ), small=(1.0, 1.0, 1.0, 1.0))
    assert split.k == 4.0
    assert split.gamma_exact == pytest.approx(0.5)
    assert split.gamma_bound == pytest.approx(2.0)


def test_overtaking_needs_enough_trials():
    split = ActivationSplit.tight(large=(2.0, ), small=(1.0, ))
    with pytest.raises(PreconditionError):
        overtaking_probability_mc(split, n_trials=1000, seed=0)


def test_overtaking_unit_scale():
    split = ActivationSplit.tight(large=(2.0, ), small=(1.0, 1.0, 1.0, 1.0))
    result = overtaking_probability_mc(split, n_trials=1000000, seed=0)
    assert split.gamma_exact == pytest.approx(1.0)
    assert result.exact == pytest.approx(0.25)
    assert result.empirical == pytest.approx(0.25, abs=0.01)
    assert result.unconditional == pytest.approx(result.empirical / 2.0, abs=0.01)
    assert result.trials == 1000000
    assert 400000 < result.conditioned < 600000


def test_overtaking_bound_is_tight_for_single_large_activation():
    split = ActivationSplit.tight(large=(4.0, ), small=(1.0, 1.0, 1.0, 1.0))
    result = overtaking_probability_mc(split, n_trials=1000000, seed=1, pool=TaskPool(threads=4))
    assert result.exact == pytest.approx(0.1476, abs=1e-4)
    assert result.bound == pytest.approx(result.exact)
    assert result.empirical == pytest.approx(result.exact, abs=0.01)


def test_overtaking_is_deterministic_across_pools():
    split = ActivationSplit.tight(large=(3.0, 2.5), small=(1.0, 0.5, 0.2))
    a = overtaking_probability_mc(split, n_trials=300000, seed=4)
    b = overtaking_probability_mc(split, n_trials=300000, seed=4, pool=TaskPool(threads=3))
    assert a == b


@pytest.mark.slow
@pytest.mark.parametrize('small, large', [
    ((1.0, ) * 4, (2.0, )),
    ((1.0, ) * 4, (4.0, )),
    ((1.0, ) * 16, (4.0, ) * 4),
])
def test_overtaking_matches_cauchy_tail(small, large):
    split = ActivationSplit.tight(large=large, small=small)
    result = overtaking_probability_mc(split, n_trials=1000000, seed=11, pool=TaskPool(threads=4))
    assert result.empirical == pytest.approx(result.exact, abs=0.01)
    assert result.empirical <= result.bound + 3 * result.std_error
    averaged = overtaking_probability_avg(split, n_trials=1000000, seed=11, pool=TaskPool(threads=4))
    assert averaged.empirical == pytest.approx(averaged.exact, abs=0.01)
    assert averaged.empirical <= averaged.bound + 3 * averaged.std_error


def random_splits(count: int):
    rng = np.random.default_rng(17)
    for _ in range(count):
        small = rng.uniform(0.1, 1.0, size=int(rng.integers(1, 8)))
        k = rng.uniform(1.0, 3.0)
        large = k * small.max() + rng.uniform(0.0, 2.0, size=int(rng.integers(1, 5)))
        yield ActivationSplit(large=tuple(large), small=tuple(small), k=k)


@pytest.mark.slow
def test_overtaking_bound_audit():
    for index, split in enumerate(random_splits(20)):
        result = overtaking_probability_mc(split, n_trials=100000, seed=index)
        assert result.exact <= result.bound + 1e-12
        assert result.empirical <= result.bound + 3 * result.std_error
        assert abs(result.empirical - result.exact) <= 4 * result.std_error
        averaged = overtaking_probability_avg(split, n_trials=100000, seed=index)
        assert averaged.exact <= averaged.bound + 1e-12
        assert averaged.empirical <= averaged.bound + 3 * averaged.std_error


def test_averaged_variant():
    split = ActivationSplit.tight(large=(4.0, ), small=(1.0, 1.0, 1.0, 1.0))
    result = overtaking_probability_avg(split, n_trials=1000000, seed=2)
    assert split.gamma_bound_avg == pytest.approx(0.5)
    assert result.bound <= cauchy_tail(4.0, 2.0)
    assert result.exact == pytest.approx(cauchy_tail(16.0, 2.0))
    assert result.empirical == pytest.approx(result.exact, abs=0.01)


def test_averaged_variant_with_equal_sizes():
    split = ActivationSplit.tight(large=(3.0, 2.0), small=(1.0, 0.5))
    plain = overtaking_probability_mc(split, n_trials=100000, seed=3)
    averaged = overtaking_probability_avg(split, n_trials=100000, seed=3)
    assert plain.empirical == averaged.empirical
    assert plain.exact == pytest.approx(averaged.exact)


#
#   Similarity Monte Carlo
#

def test_ssim_of_independent_maps_stays_below_bound():
    result = ssim_mc(patch=16, n_trials=1000, seed=0, c1=0.01, c2=0.01)
    assert result.abs_mean <= result.bound + 0.02
    assert result.bound == pytest.approx(0.01 / 2.01, abs=5e-4)
    assert result.luminance == pytest.approx(1.0, abs=1e-9)
    assert result.trials == 1000
    # single trials scatter with the covariance noise, about sqrt(2 / pi) / patch
    assert result.mean_abs == pytest.approx(np.sqrt(2.0 / np.pi) / 16, rel=0.1)
    # correlated contrast: identical maps
    a = np.random.default_rng(0).standard_normal((16, 16))
    assert ssim(a, a, window=None, c1=0.01, c2=0.01).value - result.abs_mean > 5 * result.std_error


@pytest.mark.parametrize('distribution', [Distribution.UNIFORM, Distribution.LAPLACE])
def test_ssim_for_other_distributions(distribution):
    result = ssim_mc(patch=16, n_trials=300, seed=1, distribution=distribution, c1=0.01, c2=0.01)
    assert result.abs_mean <= result.bound + 0.02


def test_ssim_monte_carlo_errors():
    with pytest.raises(PreconditionError):
        ssim_mc(patch=1, n_trials=10, seed=0)
    with pytest.raises(PreconditionError):
        ssim_mc(patch=4, n_trials=10, seed=0, distribution='cauchy')
    with pytest.raises(PreconditionError):
        ssim_mc(patch=4, n_trials=0, seed=0)


def test_rank_correlation_of_independent_maps():
    result = spearman_mc(n=1024, n_trials=200, seed=0)
    assert abs(result.mean_independent) < 0.05
    assert result.mean_control > 0.2
    assert result.mean_control - result.mean_independent > 5 * result.se_independent


def test_mse_of_independent_maps():
    result = mse_mc(n=1024, n_trials=200, seed=0)
    assert result.mean_independent == pytest.approx(2.0, abs=0.05)
    assert result.mean_negated == pytest.approx(4.0)
    assert result.mean_identical == pytest.approx(0.0, abs=1e-12)


def test_max_abs_statistic_has_higher_variance():
    result = normalization_variance_mc(n=10000, n_resamples=200, seed=0, pool=TaskPool(threads=2))
    assert result.max_abs > result.second_moment
    assert result.second_moment == pytest.approx(1.0 / 20000, rel=0.5)


#
#   Quantiles
#

def test_constant_activations():
    table = QuantileTable.from_samples({'layer': np.full((3, 50), 2.0)})
    np.testing.assert_allclose(table.values, 2.0)
    assert table.fraction('layer') == 0.0
    assert table.n_images == 3
    for cell in quantile_overtaking(table):
        assert cell.k == 1.0
        assert cell.probability == pytest.approx(cauchy_tail(1.0, np.sqrt(cell.q_low / (1.0 - cell.q_high))))


def test_exponential_quantiles():
    samples = np.random.default_rng(0).exponential(size=(50, 2000))
    table = QuantileTable.from_samples({'exp': samples})
    np.testing.assert_allclose(table.values[0], -np.log(1.0 - QUANTILES), atol=0.05)
    assert table.value('exp', 0.5) == pytest.approx(np.log(2.0), abs=0.05)


def test_nonpositive_fraction_and_vanishing_quantiles():
    block = np.zeros((2, 100))
    block[:, 70:] = np.linspace(1.0, 3.0, 30)
    table = QuantileTable.from_samples({'relu': block})
    assert table.fraction('relu') == pytest.approx(0.7)
    cells = quantile_overtaking(table, q_high=(0.95, ), q_low=(0.1, 0.5))
    assert all(cell.probability == 0.0 and cell.k == float('inf') for cell in cells)


def test_quantile_errors():
    table = QuantileTable.from_samples({'layer': np.ones((1, 10))})
    with pytest.raises(PreconditionError):
        quantile_overtaking(table, q_high=(0.3, ), q_low=(0.5, ))
    with pytest.raises(PreconditionError):
        table.column(0.33)
    with pytest.raises(DatasetError):
        QuantileTable.from_samples({})
    with pytest.raises(DatasetError):
        QuantileTable.from_samples({'a': np.ones((2, 4)), 'b': np.ones((3, 4))})


def test_activation_stats_on_conv_model():
    model = conv_plain(seed=0)
    data = bars(n=5)
    table = activation_stats(model, data)
    assert table.layers == ('relu1', 'relu2', 'relu3', 'relu4', 'relu5')
    assert table.n_images == 5
    assert np.all(np.diff(table.values, axis=1) >= 0)
    acts = forward_batch(model, data.images)['relu2'].reshape(5, -1)
    assert table.fraction('relu2') == pytest.approx(np.mean(acts <= 0))
    for cell in quantile_overtaking(table):
        assert 0.0 <= cell.probability <= 0.5
    assert activation_stats(model, data, n_images=2).n_images == 2


def test_activation_stats_errors():
    empty = Dataset(images=np.zeros((0, 1, 16, 16)), labels=np.zeros(0), provenance=Provenance.SYNTHETIC, classes=4)
    with pytest.raises(DatasetError):
        activation_stats(conv_plain(), empty)
    layers = [('flatten', LayerSpec.flatten()), ('fc', LayerSpec.dense(256, 4))]
    linear = chain(layers=layers, params={'fc.weight': np.ones((4, 256)), 'fc.bias': np.zeros(4)},
                   input_shape=(1, 16, 16))
    with pytest.raises(PreconditionError):
        activation_stats(linear, bars(n=2))


def test_table_rows():
    table = QuantileTable.from_samples({'layer': np.random.default_rng(1).uniform(size=(2, 30))})
    rows = quantile_rows(table, 'plain')
    assert len(rows) == 18
    assert len(rows[0]) == len(QUANTILE_COLUMNS)
    assert rows[0][2] == '0.10' and rows[-1][2] == '0.95'
    assert fraction_rows(table, 'plain') == [('plain', 'layer', 0.0, 2)]
    grid = overtaking_grid(table, 'plain')
    assert len(grid) == 3 * 9
    assert len(grid[0]) == len(GRID_COLUMNS)
    assert grid[0][2:4] == ('0.85', '0.10')


#
#   Shapley
#

def test_shapley_of_linear_neuron():
    w = np.array([0.5, -2.0, 1.5, 3.0])
    x = np.array([1.0, 0.3, 0.2, 0.9])
    np.testing.assert_allclose(shapley_values(w, 0.0, Activation.LINEAR, x), w * x, atol=1e-12)


def test_shapley_by_hand():
    assert shapley_exact([3.0, -1.0], 0.0, Activation.RELU, [1.0, 1.0], feature=0) == pytest.approx(2.5)
    assert shapley_exact([3.0, -1.0], 0.0, Activation.RELU, [1.0, 1.0], feature=1) == pytest.approx(-0.5)


@pytest.mark.parametrize('activation', Activation.ALL)
def test_shapley_efficiency(activation):
    rng = np.random.default_rng(3)
    w = rng.normal(size=8)
    x = rng.uniform(size=8)
    phi = shapley_values(w, -0.2, activation, x)
    values = coalition_values(w, -0.2, activation, x)
    assert abs(phi.sum() - (values[-1] - values[0])) <= 1e-10


def test_shapley_errors():
    with pytest.raises(PreconditionError):
        shapley_values(np.ones(13), 0.0, Activation.RELU, np.ones(13))
    with pytest.raises(ShapeError):
        shapley_values(np.ones(3), 0.0, Activation.RELU, np.ones(2))
    with pytest.raises(ShapeError):
        shapley_exact([1.0, 2.0], 0.0, Activation.RELU, [1.0, 1.0], feature=2)
    with pytest.raises(PreconditionError):
        shapley_values([1.0], 0.0, 'tanh', [1.0])


#
#   Attribution properties
#

@pytest.mark.parametrize('method', PropertyMethod.ALL)
def test_monotonicity_holds(method):
    result = monotonicity_test(method, n_instances=1000, seed=0)
    assert result.pairs > 0
    assert result.violations == 0


def test_strong_monotonicity_for_gradient_x_input():
    assert monotonicity_test(PropertyMethod.GI, n_instances=1000, seed=1, strong=True).violations == 0


@pytest.mark.parametrize('activation', Activation.MONOTONE)
def test_monotonicity_for_each_monotone_activation(activation):
    assert monotonicity_test(PropertyMethod.SHAPLEY, n_instances=200, seed=2, activation=activation).violations == 0


def test_monotonicity_preconditions():
    with pytest.raises(PreconditionError):
        monotonicity_test(PropertyMethod.SHAPLEY, n_instances=1, seed=0, activation=Activation.SQUARE)
    with pytest.raises(PreconditionError):
        monotonicity_test(PropertyMethod.LRP_BETA, n_instances=1, seed=0, strong=True)
    with pytest.raises(PreconditionError):
        monotonicity_test('occlusion', n_instances=1, seed=0)


def test_count_violations():
    assert count_violations(np.array([2.0, 1.0]), np.array([1.0, 3.0])) == (1, 1)
    assert count_violations(np.array([2.0, 1.0]), np.array([3.0, 1.0])) == (1, 0)
    assert count_violations(np.array([2.0, -3.0]), np.array([1.0, 3.0])) == (0, 0)
    assert count_violations(np.array([2.0, -3.0]), np.array([3.0, 1.0]), strong=True) == (1, 1)
    assert count_violations(np.array([2.0, -3.0]), np.array([1.0, 3.0]), strong=True) == (1, 0)


def positive_target(model, x):
    logits = predict(model, x[np.newaxis])[0]
    return int(np.argmax(logits)), float(np.max(logits))


@pytest.mark.parametrize('rule', DominanceRule.ALL)
def test_positive_dominance_on_bias_free_mlp(rule):
    checked = 0
    for seed in range(10):
        model = random_mlp(seed=seed)
        x = np.random.default_rng(seed).uniform(size=6)
        target, logit = positive_target(model, x)
        if logit <= 0:
            continue
        result = positive_dominance_check(model, x, target, rule=rule)
        assert result.bias_free
        assert result.positive
        assert result.conserved
        assert result.max_deviation <= 1e-6
        checked += 1
    assert checked > 0


def test_dominance_with_negative_biases_reports_only():
    model = random_mlp(seed=4, bias_scale=0.1)
    biases = {slot: -np.abs(model.param(slot)) for slot in model.slots() if slot.endswith('.bias')}
    model = model.replace(params=biases)
    for seed in range(20):
        x = np.random.default_rng(seed).uniform(size=6)
        target, logit = positive_target(model, x)
        if logit > 0:
            result = positive_dominance_check(model, x, target)
            assert not result.bias_free
            assert result.conserved is None
            return
    pytest.skip('no input with a positive logit')


def test_dominance_preconditions():
    model = random_mlp(seed=0)
    x = np.random.default_rng(0).uniform(size=6)
    target, _ = positive_target(model, x)
    with pytest.raises(PreconditionError):
        positive_dominance_check(model, x, target, rule='lrp-eps')
    biased = model.replace(params={'fc1.bias': np.full(8, 0.1)})
    with pytest.raises(PreconditionError):
        positive_dominance_check(biased, x, target)
    # all-dead network: every logit is zero
    dead = model.replace(params={'fc1.weight': np.zeros((8, 6))})
    with pytest.raises(PreconditionError):
        positive_dominance_check(dead, x, 0)


#
#   Experiment runner
#

def test_cauchy_experiment():
    rows = run_experiment('cauchy', {'k': float(np.sqrt(3.0))}, seed=5)
    assert len(rows) == 1
    assert rows[0].value == pytest.approx(1.0 / 6.0)
    assert rows[0].analytic == pytest.approx(1.0 / 6.0)
    assert rows[0].seed == 5
    assert len(rows[0].cells()) == len(THEORY_COLUMNS)
    assert '"gamma"' in rows[0].param_json


def test_shapley_experiment():
    rows = run_experiment('shapley')
    assert [row.experiment for row in rows] == ['shapley', 'shapley', 'shapley-efficiency']
    assert rows[0].value == pytest.approx(2.5)
    assert rows[1].value == pytest.approx(-0.5)
    assert rows[2].value == pytest.approx(rows[2].analytic)


def test_small_experiments():
    assert [r.experiment for r in run_experiment('mse', {'n': 64, 'trials': 20})] == \
        ['mse-independent', 'mse-negated', 'mse-identical']
    assert [r.experiment for r in run_experiment('ssim', {'trials': 20})] == \
        ['ssim-independent', 'ssim-independent-abs', 'ssim-luminance', 'ssim-structure']
    assert [r.experiment for r in run_experiment('spearman', {'n': 64, 'trials': 20})] == \
        ['spearman-independent', 'spearman-control']
    rows = run_experiment('overtaking', {'trials': 100000})
    assert [r.experiment for r in rows] == ['overtaking', 'overtaking-unconditional']
    assert rows[0].analytic == pytest.approx(0.25)
    rows = run_experiment('monotonicity', {'instances': 50, 'method': 'lrp-beta'})
    assert rows[0].value == 0.0


def test_dominance_experiment():
    rows = run_experiment('dominance', {'models': 10})
    assert len(rows) > 0
    for row in rows:
        if row.experiment == 'dominance-deviation':
            assert row.value <= 1e-6
        else:
            assert row.value > 0


def test_experiment_params():
    assert set(EXPERIMENTS) >= {'cauchy', 'ssim', 'spearman', 'mse', 'overtaking', 'overtaking-avg'}
    assert experiment_params('cauchy', {'k': 2.0}) == {'k': 2.0, 'gamma': 1.0}
    with pytest.raises(ConfigError):
        experiment_params('nope')
    with pytest.raises(ConfigError):
        experiment_params('cauchy', {'scale': 1.0})
