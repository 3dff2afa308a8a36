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
    Forward / Backward Engine
    ~~~~~~~~~~~~~~~~~~~~~~~~~

    Purely functional evaluation of a ModelGraph; the model is never touched.
    Internally everything runs batched (N x per-sample shape).
"""

from typing import Dict, Optional, Tuple

import numpy as np

from ..common.errors import SelectorError, ShapeError

from .graph import ModelGraph, Node, INPUT, slot_name
from .layers import LayerKind
from .ops import im2col, col2im, conv_forward, to_rows
from .ops import pool_windows, unpool_windows, channel_view
from .tensor import Tensor


class ReluRule:
    STANDARD = 'standard'
    GUIDED = 'guided'


Activations = Dict[str, np.ndarray]


#
#   Forward
#

def _check_batch(model: ModelGraph, batch: np.ndarray) -> np.ndarray:
    batch = np.asarray(batch, dtype=np.float64)
    if batch.shape[1:] != model.input_shape:
        raise ShapeError('node "%s" expects per-sample shape %s, got %s'
                         % (INPUT, model.input_shape, batch.shape[1:]))
    if not np.all(np.isfinite(batch)):
        raise ShapeError('node "%s" got a non-finite input' % INPUT)
    return batch


def _forward_node(model: ModelGraph, node: Node, args) -> np.ndarray:
    layer = node.layer
    kind = node.kind
    if kind == LayerKind.DENSE:
        weight = model.param(slot_name(node.name, 'weight'))
        bias = model.param(slot_name(node.name, 'bias'))
        return args[0] @ weight.T + bias
    elif kind == LayerKind.CONV2D:
        weight = model.param(slot_name(node.name, 'weight'))
        bias = model.param(slot_name(node.name, 'bias'))
        return conv_forward(args[0], weight=weight, bias=bias, layer=layer)
    elif kind == LayerKind.RELU:
        return np.maximum(args[0], 0.0)
    elif kind == LayerKind.AVG_POOL:
        return pool_windows(args[0], kernel=layer.kernel).mean(axis=-1)
    elif kind == LayerKind.MAX_POOL:
        return pool_windows(args[0], kernel=layer.kernel).max(axis=-1)
    elif kind == LayerKind.RESIDUAL_ADD:
        return args[0] + args[1]
    elif kind == LayerKind.FLATTEN:
        return args[0].reshape(args[0].shape[0], -1)
    elif kind == LayerKind.BIAS_ONLY:
        bias = model.param(slot_name(node.name, 'bias'))
        return args[0] + channel_view(bias, ndim=args[0].ndim)
    raise ShapeError('cannot evaluate node "%s" of kind %s' % (node.name, kind))


def forward_batch(model: ModelGraph, batch: np.ndarray) -> Activations:
    """ every node activation for a batch of inputs """
    acts: Activations = {INPUT: _check_batch(model=model, batch=batch)}
    for node in model.nodes[1:]:
        args = [acts[src] for src in node.inputs]
        acts[node.name] = _forward_node(model=model, node=node, args=args)
    return acts


def forward(model: ModelGraph, input: Tensor) -> Dict[str, Tensor]:
    """ every intermediate activation (per-sample shapes) plus the logits """
    x = np.asarray(input, dtype=np.float64)
    if x.shape != model.input_shape:
        raise ShapeError('node "%s" expects shape %s, got %s' % (INPUT, model.input_shape, x.shape))
    acts = forward_batch(model=model, batch=x[np.newaxis])
    return {name: value[0] for name, value in acts.items()}


def predict(model: ModelGraph, batch: np.ndarray) -> np.ndarray:
    """ logits for a batch: N x classes """
    acts = forward_batch(model=model, batch=batch)
    logits = acts[model.output]
    return logits.reshape(logits.shape[0], -1)


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=-1, keepdims=True)


#
#   Backward
#

def _backward_node(model: ModelGraph, node: Node, acts: Activations, g: np.ndarray, relu_rule: str,
                   grads: Optional[Dict[str, np.ndarray]]) -> Tuple[np.ndarray, ...]:
    """ vector-Jacobian product through one node; returns gradients per input """
    layer = node.layer
    kind = node.kind
    if kind == LayerKind.DENSE:
        a = acts[node.inputs[0]]
        weight = model.param(slot_name(node.name, 'weight'))
        if grads is not None:
            grads[slot_name(node.name, 'weight')] = g.T @ a
            grads[slot_name(node.name, 'bias')] = g.sum(axis=0)
        return (g @ weight, )
    elif kind == LayerKind.CONV2D:
        a = acts[node.inputs[0]]
        weight = model.param(slot_name(node.name, 'weight'))
        rows = to_rows(g)
        if grads is not None:
            cols = im2col(a, layer=layer)
            grads[slot_name(node.name, 'weight')] = (rows.T @ cols).reshape(weight.shape)
            grads[slot_name(node.name, 'bias')] = rows.sum(axis=0)
        dcols = rows @ weight.reshape(weight.shape[0], -1)
        return (col2im(dcols, layer=layer, input_shape=a.shape), )
    elif kind == LayerKind.RELU:
        z = acts[node.inputs[0]]
        # subgradient at 0 is 0
        if relu_rule == ReluRule.GUIDED:
            return (np.where((z > 0) & (g > 0), g, 0.0), )
        return (np.where(z > 0, g, 0.0), )
    elif kind == LayerKind.AVG_POOL:
        k = layer.kernel
        windows = np.repeat(g[..., np.newaxis], k * k, axis=-1) / (k * k)
        return (unpool_windows(windows, kernel=k), )
    elif kind == LayerKind.MAX_POOL:
        k = layer.kernel
        windows = pool_windows(acts[node.inputs[0]], kernel=k)
        winner = np.argmax(windows, axis=-1)
        mask = np.zeros_like(windows)
        np.put_along_axis(mask, winner[..., np.newaxis], 1.0, axis=-1)
        return (unpool_windows(mask * g[..., np.newaxis], kernel=k), )
    elif kind == LayerKind.RESIDUAL_ADD:
        return g, g
    elif kind == LayerKind.FLATTEN:
        a = acts[node.inputs[0]]
        return (g.reshape(a.shape), )
    elif kind == LayerKind.BIAS_ONLY:
        if grads is not None:
            axes = (0, ) + tuple(range(2, g.ndim))
            grads[slot_name(node.name, 'bias')] = g.sum(axis=axes)
        return (g, )
    raise ShapeError('cannot differentiate node "%s" of kind %s' % (node.name, kind))


def backward_batch(model: ModelGraph, acts: Activations, seed: np.ndarray, relu_rule: str = ReluRule.STANDARD,
                   with_params: bool = False) -> Tuple[np.ndarray, Dict[str, np.ndarray]]:
    """ propagate `seed` (N x output shape) down to the input """
    output = model.output
    upstream: Dict[str, np.ndarray] = {output: np.asarray(seed, dtype=np.float64).reshape(acts[output].shape)}
    param_grads: Optional[Dict[str, np.ndarray]] = {} if with_params else None
    for node in reversed(model.nodes[1:]):
        g = upstream.pop(node.name, None)
        if g is None:
            continue
        results = _backward_node(model=model, node=node, acts=acts, g=g, relu_rule=relu_rule, grads=param_grads)
        for src, value in zip(node.inputs, results):
            previous = upstream.get(src)
            upstream[src] = value if previous is None else previous + value
    grad = upstream.get(INPUT)
    if grad is None:
        grad = np.zeros_like(acts[INPUT])
    if param_grads is not None:
        # slots never reached (no gradient path) get zeros
        for slot in model.slots():
            if slot not in param_grads:
                param_grads[slot] = np.zeros_like(model.param(slot))
    return grad, param_grads or {}


def _selector_seed(model: ModelGraph, n: int, output_selector: int) -> np.ndarray:
    classes = model.classes
    if not 0 <= output_selector < classes:
        raise SelectorError('output selector %d out of range [0, %d)' % (output_selector, classes))
    seed = np.zeros((n, classes), dtype=np.float64)
    seed[:, output_selector] = 1.0
    return seed


def input_gradients(model: ModelGraph, batch: np.ndarray, output_selector: int,
                    relu_rule: str = ReluRule.STANDARD) -> np.ndarray:
    """ gradient of one logit w.r.t. each input of a batch """
    acts = forward_batch(model=model, batch=batch)
    n = acts[INPUT].shape[0]
    seed = _selector_seed(model=model, n=n, output_selector=output_selector)
    grad, _ = backward_batch(model=model, acts=acts, seed=seed, relu_rule=relu_rule)
    return grad


def backward_vjp(model: ModelGraph, input: Tensor, output_selector: int) -> np.ndarray:
    x = np.asarray(input, dtype=np.float64)
    if x.shape != model.input_shape:
        raise ShapeError('node "%s" expects shape %s, got %s' % (INPUT, model.input_shape, x.shape))
    return input_gradients(model=model, batch=x[np.newaxis], output_selector=output_selector)[0]


def backward_guided(model: ModelGraph, input: Tensor, output_selector: int) -> np.ndarray:
    """ guided rule: at each ReLU the gradient passes only where input > 0 and gradient > 0 """
    x = np.asarray(input, dtype=np.float64)
    if x.shape != model.input_shape:
        raise ShapeError('node "%s" expects shape %s, got %s' % (INPUT, model.input_shape, x.shape))
    return input_gradients(model=model, batch=x[np.newaxis], output_selector=output_selector,
                           relu_rule=ReluRule.GUIDED)[0]


def parameter_gradients(model: ModelGraph, acts: Activations,
                        seed: np.ndarray) -> Tuple[np.ndarray, Dict[str, np.ndarray]]:
    """ input gradient and per-slot parameter gradients for an output seed """
    return backward_batch(model=model, acts=acts, seed=seed, with_params=True)
