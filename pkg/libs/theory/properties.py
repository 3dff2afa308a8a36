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
    Attribution Properties
    ~~~~~~~~~~~~~~~~~~~~~~

    Monotonicity:  w_i x_i >= w_j x_j > 0  implies  |R(x_i)| >= |R(x_j)|
    Dominance:     with non-positive biases and a positive logit, every
                   layer-wise relevance sum stays positive
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..attribution import RuleSpec, linear_rule, lrp, preset_lrp_0, preset_beta
from ..common.errors import PreconditionError
from ..tensor import ModelGraph, predict
from ..utils import Log, new_rng

from .shapley import Activation, shapley_values


class PropertyMethod:

    GI = 'gi'
    LRP_BETA = 'lrp-beta'
    SHAPLEY = 'shapley'

    ALL = (GI, LRP_BETA, SHAPLEY)


# rounding slack when comparing |R_i| and |R_j|
TOLERANCE = 1e-12

MIN_FEATURES = 2
MAX_FEATURES = 8


@dataclass(frozen=True)
class MonotonicityResult:
    method: str
    instances: int
    pairs: int
    violations: int


def _gi(w: np.ndarray, x: np.ndarray) -> np.ndarray:
    # the bias keeps the pre-activation positive, so g'(z) = 1 for ReLU
    return w * x


def _lrp_beta(w: np.ndarray, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    beta = float(rng.uniform(0.0, 2.0))
    z = float(np.dot(w, x))
    relevance = np.array([[max(z, 0.0)]])
    result, _ = linear_rule(RuleSpec.beta_rule(beta), a=x[np.newaxis], weight=w[np.newaxis], bias=np.zeros(1),
                            relevance=relevance)
    return result[0]


def _shapley(w: np.ndarray, x: np.ndarray, rng: np.random.Generator, activation: Optional[str] = None) -> np.ndarray:
    if activation is None:
        activation = Activation.MONOTONE[int(rng.integers(len(Activation.MONOTONE)))]
    bias = float(rng.normal(0.0, 0.5))
    return shapley_values(weights=w, bias=bias, activation=activation, x=x)


def count_violations(contributions: np.ndarray, relevance: np.ndarray, strong: bool = False) -> Tuple[int, int]:
    """ (pairs checked, violations) over ordered pairs i != j """
    c = np.asarray(contributions, dtype=np.float64)
    r = np.abs(np.asarray(relevance, dtype=np.float64))
    pairs = 0
    violations = 0
    for i in range(c.size):
        for j in range(c.size):
            if i == j:
                continue
            if strong:
                selected = abs(c[i]) >= abs(c[j]) > 0
            else:
                selected = c[i] >= c[j] > 0
            if not selected:
                continue
            pairs += 1
            if r[j] - r[i] > TOLERANCE * (1.0 + r[j]):
                violations += 1
    return pairs, violations


def monotonicity_test(method: str, n_instances: int, seed: int, strong: bool = False,
                      activation: Optional[str] = None) -> MonotonicityResult:
    """
        random single-neuron instances; `strong` compares |w_i x_i| (gradient x input only),
        `activation` pins g for Shapley (monotone activations only)
    """
    if method not in PropertyMethod.ALL:
        raise PreconditionError('unknown monotonicity method: %s' % method)
    if strong and method != PropertyMethod.GI:
        raise PreconditionError('strong monotonicity only holds for gradient x input')
    if activation is not None:
        if method != PropertyMethod.SHAPLEY:
            raise PreconditionError('activation choice only applies to Shapley')
        if activation not in Activation.MONOTONE:
            raise PreconditionError('monotonicity needs a non-decreasing activation: %s' % activation)
    pairs = 0
    violations = 0
    for index in range(n_instances):
        rng = new_rng(seed, method, index)
        d = int(rng.integers(MIN_FEATURES, MAX_FEATURES + 1))
        w = rng.normal(0.0, 1.0, size=d)
        x = rng.uniform(0.0, 1.0, size=d)
        if method == PropertyMethod.GI:
            relevance = _gi(w, x)
        elif method == PropertyMethod.LRP_BETA:
            relevance = _lrp_beta(w, x, rng)
        else:
            relevance = _shapley(w, x, rng, activation=activation)
        checked, bad = count_violations(w * x, relevance, strong=strong)
        pairs += checked
        violations += bad
    Log.info('monotonicity %s: %d instance(s), %d pair(s), %d violation(s)', method, n_instances, pairs, violations)
    return MonotonicityResult(method=method, instances=n_instances, pairs=pairs, violations=violations)


#
#   Positive dominance
#

class DominanceRule:

    LRP_0 = 'lrp-0'
    LRP_BETA = 'lrp-beta'

    ALL = (LRP_0, LRP_BETA)


@dataclass(frozen=True)
class DominanceResult:
    """
        sums:      relevance sum per visited node, input last
        conserved: None for biased nets, whose sums are reported only
    """

    logit: float
    sums: Tuple[Tuple[str, float], ...]
    bias_free: bool
    positive: bool
    conserved: Optional[bool]

    @property
    def max_deviation(self) -> float:
        return max(abs(value - self.logit) / abs(self.logit) for _, value in self.sums)


def positive_dominance_check(model: ModelGraph, x: np.ndarray, target: int, rule: str = DominanceRule.LRP_0,
                             beta: float = 1.0, tolerance: float = 1e-6) -> DominanceResult:
    if rule == DominanceRule.LRP_0:
        config = preset_lrp_0()
    elif rule == DominanceRule.LRP_BETA:
        config = preset_beta(beta)
    else:
        raise PreconditionError('dominance check supports lrp-0 and lrp-beta: %s' % rule)
    bias_free = True
    for slot in model.slots():
        if not slot.endswith('.bias'):
            continue
        bias = model.param(slot)
        if np.any(bias > 0):
            raise PreconditionError('positive bias in %s' % slot)
        if np.any(bias != 0):
            bias_free = False
    x = np.asarray(x, dtype=np.float64)
    logit = float(predict(model, x[np.newaxis])[0, target])
    if not logit > 0:
        raise PreconditionError('target logit must be positive: %s' % logit)
    report = lrp(model, x, target=target, config=config, method=rule).report
    sums = report.sums
    positive = all(value > 0 for _, value in sums)
    conserved = None
    if bias_free:
        conserved = all(abs(value - logit) <= tolerance * abs(logit) for _, value in sums)
    return DominanceResult(logit=logit, sums=sums, bias_free=bias_free, positive=positive, conserved=conserved)
