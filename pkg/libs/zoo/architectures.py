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
    Architectures
    ~~~~~~~~~~~~~

    Desk-scale stand-ins for the usual image classifiers:

        MlpSmall     - flatten + 3 dense layers
        ConvPlain    - 4 conv (2 blocks) + 2 dense, VGG-like
        ConvResidual - conv stem + 2 residual blocks + dense head
"""

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..common.errors import ShapeError
from ..tensor import LayerKind, LayerSpec, Node, ModelGraph, INPUT, slot_name
from ..utils import new_rng, text_key


class ArchitectureId:

    MLP_SMALL = 'MlpSmall'
    CONV_PLAIN = 'ConvPlain'
    CONV_RESIDUAL = 'ConvResidual'

    ALL = (MLP_SMALL, CONV_PLAIN, CONV_RESIDUAL)


@dataclass(frozen=True)
class ArchitectureSpec:
    """ architecture id plus its width / class-count parameters """

    kind: str
    input_shape: Tuple[int, ...]
    classes: int = 2
    width: int = 8      # conv channels
    hidden: int = 32    # dense hidden units

    def __post_init__(self):
        object.__setattr__(self, 'input_shape', tuple(int(n) for n in self.input_shape))
        if self.kind not in ArchitectureId.ALL:
            raise ShapeError('unknown architecture: %s' % self.kind)
        if self.classes < 2:
            raise ShapeError('need at least 2 classes: %d' % self.classes)
        if self.width < 1 or self.hidden < 1:
            raise ShapeError('width/hidden must be positive: %d, %d' % (self.width, self.hidden))
        if len(self.input_shape) != 3:
            raise ShapeError('input shape must be C x H x W: %s' % (self.input_shape, ))
        if self.kind != ArchitectureId.MLP_SMALL:
            _, height, width = self.input_shape
            # two 2x2 pools
            if height % 4 != 0 or width % 4 != 0:
                raise ShapeError('%s needs H, W divisible by 4: %s' % (self.kind, self.input_shape))

    def descriptor(self) -> Dict:
        return {
            'kind': self.kind,
            'input_shape': list(self.input_shape),
            'classes': self.classes,
            'width': self.width,
            'hidden': self.hidden,
        }


def he_normal(shape: Sequence[int], fan_in: int, rng: np.random.Generator) -> np.ndarray:
    """ zero-mean normal, variance 2 / fan_in (no truncation) """
    return rng.normal(loc=0.0, scale=np.sqrt(2.0 / fan_in), size=tuple(shape))


def init_params(nodes: Sequence[Node], seed: int) -> Dict[str, np.ndarray]:
    params = {}
    for node in nodes:
        for param, shape in node.layer.parameter_shapes().items():
            slot = slot_name(node=node.name, param=param)
            if param == 'weight':
                rng = new_rng(seed, text_key(slot))
                params[slot] = he_normal(shape=shape, fan_in=node.layer.fan_in, rng=rng)
            else:
                params[slot] = np.zeros(shape, dtype=np.float64)
    return params


class _Builder:
    """ appends nodes one after another, tracking the current tail """

    def __init__(self, input_shape: Tuple[int, ...]):
        super().__init__()
        self.nodes: List[Node] = [Node(name=INPUT, layer=LayerSpec.input())]
        self.tail = INPUT
        self.shape = input_shape

    def add(self, name: str, layer: LayerSpec, inputs: Tuple[str, ...] = None) -> str:
        if inputs is None:
            inputs = (self.tail, )
        self.nodes.append(Node(name=name, layer=layer, inputs=inputs))
        self.tail = name
        return name


def _mlp_small(spec: ArchitectureSpec, b: _Builder) -> Dict:
    c, h, w = spec.input_shape
    b.add('flatten', LayerSpec.flatten())
    b.add('fc1', LayerSpec.dense(c * h * w, spec.hidden))
    b.add('relu1', LayerSpec.relu())
    b.add('fc2', LayerSpec.dense(spec.hidden, spec.hidden))
    b.add('relu2', LayerSpec.relu())
    b.add('fc3', LayerSpec.dense(spec.hidden, spec.classes))
    return {'split': 'relu2', 'blocks': []}


def _conv_plain(spec: ArchitectureSpec, b: _Builder) -> Dict:
    c, h, w = spec.input_shape
    k = spec.width
    b.add('conv1', LayerSpec.conv2d(c, k, kernel=3, padding=1))
    b.add('relu1', LayerSpec.relu())
    b.add('conv2', LayerSpec.conv2d(k, k, kernel=3, padding=1))
    b.add('relu2', LayerSpec.relu())
    b.add('pool1', LayerSpec.avg_pool(2))
    b.add('conv3', LayerSpec.conv2d(k, k, kernel=3, padding=1))
    b.add('relu3', LayerSpec.relu())
    b.add('conv4', LayerSpec.conv2d(k, k, kernel=3, padding=1))
    b.add('relu4', LayerSpec.relu())
    b.add('pool2', LayerSpec.avg_pool(2))
    b.add('flatten', LayerSpec.flatten())
    b.add('fc1', LayerSpec.dense(k * (h // 4) * (w // 4), spec.hidden))
    b.add('relu5', LayerSpec.relu())
    b.add('fc2', LayerSpec.dense(spec.hidden, spec.classes))
    return {'split': 'flatten', 'blocks': [['conv1', 'conv2'], ['conv3', 'conv4']]}


def _conv_residual(spec: ArchitectureSpec, b: _Builder) -> Dict:
    c, h, w = spec.input_shape
    k = spec.width
    b.add('stem', LayerSpec.conv2d(c, k, kernel=3, padding=1))
    b.add('stem_relu', LayerSpec.relu())
    blocks = [['stem']]
    for index in (1, 2):
        prefix = 'b%d_' % index
        skip = b.tail
        b.add(prefix + 'conv1', LayerSpec.conv2d(k, k, kernel=3, padding=1))
        b.add(prefix + 'relu1', LayerSpec.relu())
        b.add(prefix + 'conv2', LayerSpec.conv2d(k, k, kernel=3, padding=1))
        # inputs: (skip path, weighted path)
        b.add(prefix + 'add', LayerSpec.residual_add(), inputs=(skip, prefix + 'conv2'))
        b.add(prefix + 'relu2', LayerSpec.relu())
        b.add(prefix + 'pool', LayerSpec.avg_pool(2))
        blocks.append([prefix + 'conv1', prefix + 'conv2'])
    b.add('flatten', LayerSpec.flatten())
    b.add('fc', LayerSpec.dense(k * (h // 4) * (w // 4), spec.classes))
    return {'split': 'flatten', 'blocks': blocks}


_LAYOUTS = {
    ArchitectureId.MLP_SMALL: _mlp_small,
    ArchitectureId.CONV_PLAIN: _conv_plain,
    ArchitectureId.CONV_RESIDUAL: _conv_residual,
}


def build(arch: ArchitectureSpec, seed: int) -> ModelGraph:
    """ fresh He-initialized model; deterministic per (arch, seed) """
    b = _Builder(input_shape=arch.input_shape)
    layout = _LAYOUTS[arch.kind](arch, b)
    info = arch.descriptor()
    info['blocks'] = layout['blocks']
    info['seed'] = seed
    model = ModelGraph(nodes=b.nodes, params=init_params(nodes=b.nodes, seed=seed), input_shape=arch.input_shape,
                       output=b.tail, split=layout['split'], arch=info)
    assert arch.kind != ArchitectureId.CONV_RESIDUAL or len(model.nodes_of_kind(LayerKind.RESIDUAL_ADD)) > 0, \
        'residual model without ResidualAdd: %s' % model
    return model


def residual_adds(model: ModelGraph) -> List[Node]:
    return model.nodes_of_kind(LayerKind.RESIDUAL_ADD)
