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
    Method Registry
    ~~~~~~~~~~~~~~~

    One entry point naming every attribution method the harnesses run.
"""

from dataclasses import dataclass, fields
from typing import Any, Callable, Dict, Mapping, Optional

import numpy as np

from ..common.errors import ConfigError
from ..tensor import ModelGraph
from ..utils import new_rng

from .beta import BetaVariant, DEFAULT_CAP
from .gradients import gradient, gradient_x_input, integrated_gradients, smoothgrad, guided_backprop
from .lrp import LrpConfig, lrp
from .lrp import preset_lrp_0, preset_epsilon, preset_beta, preset_adaptive, preset_composite, preset_beta_eps
from .maps import AttributionMap, logit_target


class Method:

    GRADIENT = 'gradient'
    GRADIENT_X_INPUT = 'gradient_x_input'
    INTEGRATED_GRADIENTS = 'integrated_gradients'
    SMOOTHGRAD = 'smoothgrad'
    GUIDED_BACKPROP = 'guided_backprop'
    LRP_0 = 'lrp-0'
    LRP_EPS = 'lrp-eps'
    LRP_GAMMA = 'lrp-gamma'
    LRP_BETA = 'lrp-beta'
    LRP_ADAPTIVE = 'lrp-adaptive'
    LRP_COMPOSITE = 'lrp-composite'
    LRP_BETA_EPS = 'lrp-beta-eps'
    RANDOM = 'random'

    LRP = (LRP_0, LRP_EPS, LRP_GAMMA, LRP_BETA, LRP_ADAPTIVE, LRP_COMPOSITE, LRP_BETA_EPS)
    ALL = (GRADIENT, GRADIENT_X_INPUT, INTEGRATED_GRADIENTS, SMOOTHGRAD, GUIDED_BACKPROP) + LRP + (RANDOM, )


@dataclass(frozen=True)
class MethodOptions:
    baseline: float = 0.0       # integrated gradients: constant baseline value
    steps: int = 32             # integrated gradients
    sigma: float = 0.15         # smoothgrad noise std
    samples: int = 16           # smoothgrad
    eps: float = 0.01           # lrp-eps, lrp-beta-eps
    beta: float = 1.0           # lrp-beta, lrp-beta-eps
    beta_variant: str = BetaVariant.DISPLAYED
    cap: float = DEFAULT_CAP

    @classmethod
    def from_dict(cls, info: Optional[Mapping[str, Any]]):
        if info is None:
            return cls()
        known = set(item.name for item in fields(cls))
        for key in info:
            if key not in known:
                raise ConfigError('unknown method option: %s' % key)
        return cls(**dict(info))


def lrp_config_for(name: str, options: MethodOptions = MethodOptions()) -> LrpConfig:
    if name == Method.LRP_0:
        return preset_lrp_0()
    elif name == Method.LRP_EPS:
        return preset_epsilon(eps=options.eps)
    elif name in (Method.LRP_GAMMA, Method.LRP_COMPOSITE):
        return preset_composite()
    elif name == Method.LRP_BETA:
        return preset_beta(beta=options.beta)
    elif name == Method.LRP_ADAPTIVE:
        return preset_adaptive(cap=options.cap, variant=options.beta_variant)
    elif name == Method.LRP_BETA_EPS:
        return preset_beta_eps(beta=options.beta, eps=options.eps)
    raise ConfigError('not an LRP method: %s' % name)


def random_map(model: ModelGraph, x: np.ndarray, target: int, seed: int) -> AttributionMap:
    """ input-independent Gaussian noise; fresh per seed """
    rng = new_rng(seed)
    values = rng.standard_normal(model.input_shape)
    return AttributionMap(values=values, method=Method.RANDOM, target=logit_target(target))


MethodRunner = Callable[[ModelGraph, np.ndarray, int, int, MethodOptions], AttributionMap]

_RUNNERS: Dict[str, MethodRunner] = {
    Method.GRADIENT: lambda m, x, t, s, o: gradient(m, x, t),
    Method.GRADIENT_X_INPUT: lambda m, x, t, s, o: gradient_x_input(m, x, t),
    Method.INTEGRATED_GRADIENTS: lambda m, x, t, s, o: integrated_gradients(
        m, x, t, baseline=np.full(m.input_shape, o.baseline), steps=o.steps),
    Method.SMOOTHGRAD: lambda m, x, t, s, o: smoothgrad(m, x, t, sigma=o.sigma, n_samples=o.samples, seed=s),
    Method.GUIDED_BACKPROP: lambda m, x, t, s, o: guided_backprop(m, x, t),
    Method.RANDOM: lambda m, x, t, s, o: random_map(m, x, t, seed=s),
}


def compute_attribution(name: str, model: ModelGraph, x: np.ndarray, target: int, seed: int = 0,
                        options: Optional[MethodOptions] = None) -> AttributionMap:
    if options is None:
        options = MethodOptions()
    if name in Method.LRP:
        return lrp(model=model, x=x, target=target, config=lrp_config_for(name=name, options=options), method=name)
    runner = _RUNNERS.get(name)
    if runner is None:
        raise ConfigError('unknown attribution method: %s' % name)
    return runner(model, x, target, seed, options)


def check_methods(names) -> list:
    for name in names:
        if name not in Method.ALL:
            raise ConfigError('unknown attribution method: %s' % name)
    return list(names)
