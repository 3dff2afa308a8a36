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
    Exact Shapley Values
    ~~~~~~~~~~~~~~~~~~~~

    Single neuron f(S) = g(sum_{i in S} w_i x_i + b), absent features set to 0.
    All 2^d coalitions are evaluated once and shared by every feature:

        phi(i) = sum_S c_|S| [f(S + i) - f(S)],   c_s = 1 / (d * C(d - 1, s))
"""

from math import comb
from typing import Callable, Dict, Sequence, Union

import numpy as np

from ..common.errors import PreconditionError, ShapeError


MAX_FEATURES = 12


class Activation:

    RELU = 'relu'
    LINEAR = 'linear'
    SOFTPLUS = 'softplus'
    SQUARE = 'square'

    MONOTONE = (RELU, LINEAR, SOFTPLUS)
    ALL = (RELU, LINEAR, SOFTPLUS, SQUARE)


_FUNCTIONS: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    Activation.RELU: lambda z: np.maximum(z, 0.0),
    Activation.LINEAR: lambda z: z,
    Activation.SOFTPLUS: lambda z: np.logaddexp(0.0, z),
    Activation.SQUARE: lambda z: z * z,
}


def activation_fn(activation: Union[str, Callable]) -> Callable[[np.ndarray], np.ndarray]:
    if callable(activation):
        return activation
    fn = _FUNCTIONS.get(activation)
    if fn is None:
        raise PreconditionError('unknown activation: %s' % activation)
    return fn


def coalition_values(weights: Sequence[float], bias: float, activation: Union[str, Callable],
                     x: Sequence[float]) -> np.ndarray:
    """ f over all coalitions, indexed by bitmask (bit i = feature i present) """
    w = np.asarray(weights, dtype=np.float64).ravel()
    x = np.asarray(x, dtype=np.float64).ravel()
    if w.shape != x.shape:
        raise ShapeError('weights and inputs differ: %s vs %s' % (w.shape, x.shape))
    d = w.size
    if d == 0 or d > MAX_FEATURES:
        raise PreconditionError('exact Shapley needs 1 <= d <= %d features: %d' % (MAX_FEATURES, d))
    masks = np.arange(2 ** d)
    present = (masks[:, np.newaxis] >> np.arange(d)) & 1
    z = present @ (w * x) + bias
    return np.asarray(activation_fn(activation)(z), dtype=np.float64)


def _phi(values: np.ndarray, d: int, feature: int) -> float:
    masks = np.arange(2 ** d)
    bit = 1 << feature
    without = masks[(masks & bit) == 0]
    sizes = np.array([bin(int(m)).count('1') for m in without])
    weights = np.array([1.0 / (d * comb(d - 1, int(s))) for s in sizes])
    return float(np.sum(weights * (values[without | bit] - values[without])))


def shapley_exact(weights: Sequence[float], bias: float, activation: Union[str, Callable], x: Sequence[float],
                  feature: int) -> float:
    values = coalition_values(weights=weights, bias=bias, activation=activation, x=x)
    d = int(np.log2(values.size))
    if not 0 <= feature < d:
        raise ShapeError('feature %d out of range [0, %d)' % (feature, d))
    return _phi(values, d=d, feature=feature)


def shapley_values(weights: Sequence[float], bias: float, activation: Union[str, Callable],
                   x: Sequence[float]) -> np.ndarray:
    values = coalition_values(weights=weights, bias=bias, activation=activation, x=x)
    d = int(np.log2(values.size))
    return np.array([_phi(values, d=d, feature=i) for i in range(d)])
