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
    Test Builders
    ~~~~~~~~~~~~~

    Small hand-wired models and datasets shared by the test modules.
"""

import asyncio
import struct
from typing import Optional, Sequence, Tuple

import numpy as np

from libs.tensor import LayerSpec, ModelGraph, Node, INPUT, forward_batch
from libs.utils import new_rng
from libs.zoo import ArchitectureId, ArchitectureSpec, Dataset, build, synth_dataset


def sync(coro):
    """ result of a coroutine (file I/O and command handlers are async) """
    return asyncio.run(coro)


def write_idx(path, magic, dims, body):
    with open(path, 'wb') as file:
        file.write(struct.pack('>I', magic))
        file.write(struct.pack('>%dI' % len(dims), *dims))
        file.write(bytes(body))


def chain(layers: Sequence[Tuple[str, LayerSpec]], params: dict, input_shape: Tuple[int, ...],
          split: Optional[str] = None) -> ModelGraph:
    """ sequential model; every node reads the previous one """
    nodes = [Node(name=INPUT, layer=LayerSpec.input())]
    for name, layer in layers:
        nodes.append(Node(name=name, layer=layer, inputs=(nodes[-1].name, )))
    return ModelGraph(nodes=nodes, params=params, input_shape=input_shape, output=nodes[-1].name, split=split)


def linear_model(weight: Sequence[Sequence[float]], bias: Sequence[float]) -> ModelGraph:
    w = np.asarray(weight, dtype=np.float64)
    layers = [('fc', LayerSpec.dense(w.shape[1], w.shape[0]))]
    params = {'fc.weight': w, 'fc.bias': np.asarray(bias, dtype=np.float64)}
    return chain(layers=layers, params=params, input_shape=(w.shape[1], ))


def random_mlp(seed: int, sizes: Sequence[int] = (6, 8, 5, 3), bias_scale: float = 0.0) -> ModelGraph:
    """ dense / ReLU stack on a vector input; bias_scale = 0 gives a bias-free net """
    rng = new_rng(seed, 'mlp')
    layers = []
    params = {}
    count = len(sizes) - 1
    for index in range(count):
        name = 'fc%d' % (index + 1)
        fan_in, fan_out = sizes[index], sizes[index + 1]
        layers.append((name, LayerSpec.dense(fan_in, fan_out)))
        params[name + '.weight'] = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_out, fan_in))
        params[name + '.bias'] = bias_scale * rng.normal(size=fan_out)
        if index < count - 1:
            layers.append(('relu%d' % (index + 1), LayerSpec.relu()))
    return chain(layers=layers, params=params, input_shape=(sizes[0], ))


def tiny_conv(seed: int, classes: int = 3, pool: str = 'avg') -> ModelGraph:
    """ conv / ReLU / pool / dense on 1 x 8 x 8 images """
    rng = new_rng(seed, 'conv')
    pooling = LayerSpec.avg_pool(2) if pool == 'avg' else LayerSpec.max_pool(2)
    layers = [
        ('conv1', LayerSpec.conv2d(1, 3, kernel=3, padding=1)),
        ('relu1', LayerSpec.relu()),
        ('pool1', pooling),
        ('flatten', LayerSpec.flatten()),
        ('fc', LayerSpec.dense(3 * 4 * 4, classes)),
    ]
    params = {
        'conv1.weight': rng.normal(0.0, np.sqrt(2.0 / 9), size=(3, 1, 3, 3)),
        'conv1.bias': np.zeros(3),
        'fc.weight': rng.normal(0.0, np.sqrt(2.0 / 48), size=(classes, 48)),
        'fc.bias': np.zeros(classes),
    }
    return chain(layers=layers, params=params, input_shape=(1, 8, 8), split='flatten')


def away_from_kinks(model: ModelGraph, x: np.ndarray, margin: float = 1e-3) -> bool:
    """ no ReLU input within `margin` of zero """
    acts = forward_batch(model=model, batch=x[np.newaxis])
    for node in model.nodes:
        if node.kind == 'ReLU':
            if np.any(np.abs(acts[node.inputs[0]]) < margin):
                return False
    return True


def numeric_gradient(model: ModelGraph, x: np.ndarray, target: int, h: float = 1e-4) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    grad = np.zeros_like(x)
    flat = grad.reshape(-1)
    for i in range(x.size):
        up = x.copy().reshape(-1)
        down = x.copy().reshape(-1)
        up[i] += h
        down[i] -= h
        batch = np.stack([up.reshape(x.shape), down.reshape(x.shape)])
        logits = forward_batch(model=model, batch=batch)[model.output].reshape(2, -1)
        flat[i] = (logits[0, target] - logits[1, target]) / (2 * h)
    return grad


def blobs(n: int = 32, seed: int = 0, classes: int = 2) -> Dataset:
    return synth_dataset(kind='blobs', n=n, seed=seed, classes=classes)


def bars(n: int = 16, seed: int = 0, size: int = 16, classes: int = 4) -> Dataset:
    return synth_dataset(kind='bar-shapes', n=n, seed=seed, size=size, classes=classes)


def conv_plain(seed: int = 0, size: int = 16, classes: int = 4, width: int = 4, hidden: int = 16) -> ModelGraph:
    arch = ArchitectureSpec(kind=ArchitectureId.CONV_PLAIN, input_shape=(1, size, size), classes=classes,
                            width=width, hidden=hidden)
    return build(arch=arch, seed=seed)


def conv_residual(seed: int = 0, size: int = 16, classes: int = 4, width: int = 4) -> ModelGraph:
    arch = ArchitectureSpec(kind=ArchitectureId.CONV_RESIDUAL, input_shape=(1, size, size), classes=classes,
                            width=width)
    return build(arch=arch, seed=seed)


def mlp_small(seed: int = 0, classes: int = 2, hidden: int = 16, shape=(1, 4, 4)) -> ModelGraph:
    arch = ArchitectureSpec(kind=ArchitectureId.MLP_SMALL, input_shape=shape, classes=classes, hidden=hidden)
    return build(arch=arch, seed=seed)
