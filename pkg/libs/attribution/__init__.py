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
    Attribution
    ~~~~~~~~~~~

    Gradient family, the LRP rule set, intermediate targets and the
    skip-path decomposition.
"""

from .maps import AttributionMap, ChannelReduction, reduce_channels, logit_target, sum_target
from .beta import BetaVariant, adaptive_beta, adaptive_beta_array
from .gradients import gradient, gradient_x_input, integrated_gradients, smoothgrad, guided_backprop
from .lrp import Rule, RuleSpec, LrpConfig, LrpReport, Propagation
from .lrp import preset_lrp_0, preset_epsilon, preset_beta, preset_adaptive, preset_composite, preset_beta_eps
from .lrp import gamma_schedule, linear_rule, propagate, logit_seed, lrp, lrp_batch, attribute_intermediate
from .skip import SkipSplit, skip_split, designated_add
from .registry import Method, MethodOptions, compute_attribution, lrp_config_for, random_map, check_methods


__all__ = [

    'AttributionMap', 'ChannelReduction', 'reduce_channels', 'logit_target', 'sum_target',
    'BetaVariant', 'adaptive_beta', 'adaptive_beta_array',

    'gradient', 'gradient_x_input', 'integrated_gradients', 'smoothgrad', 'guided_backprop',

    'Rule', 'RuleSpec', 'LrpConfig', 'LrpReport', 'Propagation',
    'preset_lrp_0', 'preset_epsilon', 'preset_beta', 'preset_adaptive', 'preset_composite', 'preset_beta_eps',
    'gamma_schedule', 'linear_rule', 'propagate', 'logit_seed', 'lrp', 'lrp_batch', 'attribute_intermediate',

    'SkipSplit', 'skip_split', 'designated_add',

    'Method', 'MethodOptions', 'compute_attribution', 'lrp_config_for', 'random_map', 'check_methods',

]
