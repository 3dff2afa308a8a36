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
    Gradient Family
    ~~~~~~~~~~~~~~~

    Gradient, Gradient x Input, Integrated Gradients (midpoint Riemann sum),
    SmoothGrad and Guided Backprop.
"""

from typing import Optional

import numpy as np

from ..common.errors import ShapeError
from ..tensor import ModelGraph, ReluRule, backward_vjp, backward_guided, input_gradients
from ..utils import new_rng

from .maps import AttributionMap, logit_target


# interpolation points per engine call
CHUNK = 64


def _check_input(model: ModelGraph, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != model.input_shape:
        raise ShapeError('input shape %s does not match model input %s' % (x.shape, model.input_shape))
    return x


def _mean_gradient(model: ModelGraph, batch: np.ndarray, target: int, relu_rule: str = ReluRule.STANDARD):
    total = np.zeros(batch.shape[1:], dtype=np.float64)
    for start in range(0, batch.shape[0], CHUNK):
        grads = input_gradients(model=model, batch=batch[start:start + CHUNK], output_selector=target,
                                relu_rule=relu_rule)
        total += grads.sum(axis=0)
    return total / batch.shape[0]


def gradient(model: ModelGraph, x: np.ndarray, target: int) -> AttributionMap:
    grad = backward_vjp(model=model, input=_check_input(model, x), output_selector=target)
    return AttributionMap(values=grad, method='gradient', target=logit_target(target))


def gradient_x_input(model: ModelGraph, x: np.ndarray, target: int) -> AttributionMap:
    x = _check_input(model, x)
    grad = backward_vjp(model=model, input=x, output_selector=target)
    return AttributionMap(values=grad * x, method='gradient_x_input', target=logit_target(target))


def integrated_gradients(model: ModelGraph, x: np.ndarray, target: int, baseline: Optional[np.ndarray] = None,
                         steps: int = 32) -> AttributionMap:
    """ (x - baseline) * mean gradient at the midpoints of m equal path segments """
    x = _check_input(model, x)
    if baseline is None:
        baseline = np.zeros_like(x)
    baseline = np.asarray(baseline, dtype=np.float64)
    if baseline.shape != x.shape:
        raise ShapeError('baseline shape %s does not match input %s' % (baseline.shape, x.shape))
    if steps < 1:
        raise ShapeError('integrated gradients needs at least 1 step: %d' % steps)
    delta = x - baseline
    alphas = (np.arange(steps, dtype=np.float64) + 0.5) / steps
    path = baseline[np.newaxis] + alphas.reshape((-1, ) + (1, ) * x.ndim) * delta[np.newaxis]
    grad = _mean_gradient(model=model, batch=path, target=target)
    return AttributionMap(values=delta * grad, method='integrated_gradients', target=logit_target(target))


def smoothgrad(model: ModelGraph, x: np.ndarray, target: int, sigma: float = 0.15, n_samples: int = 16,
               seed: int = 0) -> AttributionMap:
    """ mean gradient over Gaussian-perturbed copies of x """
    x = _check_input(model, x)
    if sigma < 0 or n_samples < 1:
        raise ShapeError('smoothgrad needs sigma >= 0 and n_samples >= 1: %s, %s' % (sigma, n_samples))
    if sigma == 0:
        grad = backward_vjp(model=model, input=x, output_selector=target)
    else:
        rng = new_rng(seed)
        noisy = x[np.newaxis] + rng.normal(0.0, sigma, size=(n_samples, ) + x.shape)
        grad = _mean_gradient(model=model, batch=noisy, target=target)
    return AttributionMap(values=grad, method='smoothgrad', target=logit_target(target))


def guided_backprop(model: ModelGraph, x: np.ndarray, target: int) -> AttributionMap:
    grad = backward_guided(model=model, input=_check_input(model, x), output_selector=target)
    return AttributionMap(values=grad, method='guided_backprop', target=logit_target(target))
