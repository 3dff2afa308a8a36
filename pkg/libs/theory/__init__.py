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

"""
    Theory Lab
    ~~~~~~~~~~

    Analytic values and Monte Carlo checks behind the audit: similarity
    metrics on independent maps, overtaking of large activations by small
    ones, activation quantiles, exact Shapley values and attribution
    properties.
"""

from .cauchy import CauchyParams, cauchy_tail, cauchy_cdf
from .overtaking import ActivationSplit, OvertakingResult, overtaking_probability_mc, overtaking_probability_avg
from .montecarlo import Distribution, SsimResult, RankResult, MseResult, NormalizationVariance
from .montecarlo import ssim_mc, spearman_mc, mse_mc, normalization_variance_mc
from .quantiles import QUANTILES, HIGH_QUANTILES, LOW_QUANTILES, QuantileTable, OvertakingCell
from .quantiles import activation_stats, quantile_overtaking
from .shapley import Activation, coalition_values, shapley_exact, shapley_values
from .properties import PropertyMethod, MonotonicityResult, DominanceRule, DominanceResult
from .properties import count_violations, monotonicity_test, positive_dominance_check
from .experiments import THEORY_COLUMNS, TheoryRow, EXPERIMENTS, experiment_params, run_experiment
from .experiments import QUANTILE_COLUMNS, FRACTION_COLUMNS, GRID_COLUMNS
from .experiments import quantile_rows, fraction_rows, overtaking_grid


__all__ = [

    'CauchyParams', 'cauchy_tail', 'cauchy_cdf',
    'ActivationSplit', 'OvertakingResult', 'overtaking_probability_mc', 'overtaking_probability_avg',
    'Distribution', 'SsimResult', 'RankResult', 'MseResult', 'NormalizationVariance',
    'ssim_mc', 'spearman_mc', 'mse_mc', 'normalization_variance_mc',
    'QUANTILES', 'HIGH_QUANTILES', 'LOW_QUANTILES', 'QuantileTable', 'OvertakingCell',
    'activation_stats', 'quantile_overtaking',
    'Activation', 'coalition_values', 'shapley_exact', 'shapley_values',
    'PropertyMethod', 'MonotonicityResult', 'DominanceRule', 'DominanceResult',
    'count_violations', 'monotonicity_test', 'positive_dominance_check',
    'THEORY_COLUMNS', 'TheoryRow', 'EXPERIMENTS', 'experiment_params', 'run_experiment',
    'QUANTILE_COLUMNS', 'FRACTION_COLUMNS', 'GRID_COLUMNS',
    'quantile_rows', 'fraction_rows', 'overtaking_grid',

]
