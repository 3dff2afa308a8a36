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
    Layer Specs
    ~~~~~~~~~~~

    Hyperparameters and parameter-slot shapes of every supported layer kind.
"""

from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

from ..common.errors import ShapeError


Shape = Tuple[int, ...]


class LayerKind:

    INPUT = 'Input'
    DENSE = 'Dense'
    CONV2D = 'Conv2D'
    AVG_POOL = 'AvgPool'
    MAX_POOL = 'MaxPool'
    RELU = 'ReLU'
    RESIDUAL_ADD = 'ResidualAdd'
    FLATTEN = 'Flatten'
    BIAS_ONLY = 'BiasOnly'

    ALL = (INPUT, DENSE, CONV2D, AVG_POOL, MAX_POOL, RELU, RESIDUAL_ADD, FLATTEN, BIAS_ONLY)

    # kinds carrying a weight matrix
    WEIGHTED = (DENSE, CONV2D)
    POOLING = (AVG_POOL, MAX_POOL)


@dataclass(frozen=True)
class LayerSpec:
    """
        For Dense, in/out features are the vector sizes; for Conv2D they are
        channel counts; BiasOnly uses in_features as its channel count.
        Pooling windows are square with stride == kernel.
    """

    kind: str
    in_features: int = 0
    out_features: int = 0
    kernel: int = 0
    stride: int = 1
    padding: int = 0

    def __post_init__(self):
        if self.kind not in LayerKind.ALL:
            raise ShapeError('unknown layer kind: %s' % self.kind)
        if self.kind in (LayerKind.DENSE, LayerKind.CONV2D):
            if self.in_features <= 0 or self.out_features <= 0:
                raise ShapeError('%s needs positive fan-in/out: %s' % (self.kind, self))
        if self.kind == LayerKind.CONV2D or self.kind in LayerKind.POOLING:
            if self.kernel <= 0 or self.stride <= 0 or self.padding < 0:
                raise ShapeError('%s kernel/stride/padding error: %s' % (self.kind, self))
        if self.kind == LayerKind.BIAS_ONLY and self.in_features <= 0:
            raise ShapeError('BiasOnly needs a positive channel count: %s' % self)

    #
    #   Factories
    #

    @classmethod
    def input(cls):
        return cls(kind=LayerKind.INPUT)

    @classmethod
    def dense(cls, in_features: int, out_features: int):
        return cls(kind=LayerKind.DENSE, in_features=in_features, out_features=out_features)

    @classmethod
    def conv2d(cls, in_channels: int, out_channels: int, kernel: int, stride: int = 1, padding: int = 0):
        return cls(kind=LayerKind.CONV2D, in_features=in_channels, out_features=out_channels,
                   kernel=kernel, stride=stride, padding=padding)

    @classmethod
    def avg_pool(cls, kernel: int):
        return cls(kind=LayerKind.AVG_POOL, kernel=kernel, stride=kernel)

    @classmethod
    def max_pool(cls, kernel: int):
        return cls(kind=LayerKind.MAX_POOL, kernel=kernel, stride=kernel)

    @classmethod
    def relu(cls):
        return cls(kind=LayerKind.RELU)

    @classmethod
    def residual_add(cls):
        return cls(kind=LayerKind.RESIDUAL_ADD)

    @classmethod
    def flatten(cls):
        return cls(kind=LayerKind.FLATTEN)

    @classmethod
    def bias_only(cls, channels: int):
        return cls(kind=LayerKind.BIAS_ONLY, in_features=channels, out_features=channels)

    #
    #   Shapes
    #

    @property
    def arity(self) -> int:
        if self.kind == LayerKind.INPUT:
            return 0
        elif self.kind == LayerKind.RESIDUAL_ADD:
            return 2
        return 1

    @property
    def fan_in(self) -> int:
        if self.kind == LayerKind.CONV2D:
            return self.in_features * self.kernel * self.kernel
        return self.in_features

    def parameter_shapes(self) -> Dict[str, Shape]:
        if self.kind == LayerKind.DENSE:
            return {'weight': (self.out_features, self.in_features), 'bias': (self.out_features,)}
        elif self.kind == LayerKind.CONV2D:
            k = self.kernel
            return {'weight': (self.out_features, self.in_features, k, k), 'bias': (self.out_features,)}
        elif self.kind == LayerKind.BIAS_ONLY:
            return {'bias': (self.in_features,)}
        return {}

    def output_shape(self, name: str, input_shapes: Sequence[Shape]) -> Shape:
        """ infer the per-sample output shape; raises ShapeError naming the node """
        if len(input_shapes) != self.arity:
            raise ShapeError('node "%s" (%s) expects %d input(s), got %d'
                             % (name, self.kind, self.arity, len(input_shapes)))
        kind = self.kind
        if kind == LayerKind.RESIDUAL_ADD:
            first, second = input_shapes
            if first != second:
                raise ShapeError('node "%s" adds unequal shapes %s and %s' % (name, first, second))
            return first
        shape = input_shapes[0]
        if kind in (LayerKind.RELU, ):
            return shape
        elif kind == LayerKind.FLATTEN:
            size = 1
            for n in shape:
                size *= n
            return (size, )
        elif kind == LayerKind.DENSE:
            if shape != (self.in_features, ):
                raise ShapeError('node "%s" expects vector (%d,), got %s' % (name, self.in_features, shape))
            return (self.out_features, )
        elif kind == LayerKind.BIAS_ONLY:
            if len(shape) == 0 or shape[0] != self.in_features:
                raise ShapeError('node "%s" expects %d channels, got %s' % (name, self.in_features, shape))
            return shape
        # spatial layers
        if len(shape) != 3:
            raise ShapeError('node "%s" (%s) expects C x H x W input, got %s' % (name, kind, shape))
        channels, height, width = shape
        if kind == LayerKind.CONV2D:
            if channels != self.in_features:
                raise ShapeError('node "%s" expects %d channels, got %d' % (name, self.in_features, channels))
            k, s, p = self.kernel, self.stride, self.padding
            if height + 2 * p < k or width + 2 * p < k:
                raise ShapeError('node "%s" kernel %d larger than padded input %s' % (name, k, shape))
            return self.out_features, (height + 2 * p - k) // s + 1, (width + 2 * p - k) // s + 1
        # pooling: windows must tile exactly
        k = self.kernel
        if height % k != 0 or width % k != 0:
            raise ShapeError('node "%s" pool window %d does not tile input %s' % (name, k, shape))
        return channels, height // k, width // k
