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
    Tensor Net
    ~~~~~~~~~~

    Float64 tensors, layer specs, immutable model graphs and the
    forward/backward engine every attribution rule is built on.
"""

from .tensor import Tensor, as_tensor, freeze, zeros
from .layers import LayerKind, LayerSpec, Shape
from .graph import Node, ModelGraph, INPUT, slot_name, slot_node
from .engine import ReluRule, Activations
from .engine import forward, forward_batch, predict, softmax
from .engine import backward_batch, backward_vjp, backward_guided, input_gradients, parameter_gradients


__all__ = [

    'Tensor', 'as_tensor', 'freeze', 'zeros',
    'LayerKind', 'LayerSpec', 'Shape',
    'Node', 'ModelGraph', 'INPUT', 'slot_name', 'slot_node',

    'ReluRule', 'Activations',
    'forward', 'forward_batch', 'predict', 'softmax',
    'backward_batch', 'backward_vjp', 'backward_guided', 'input_gradients', 'parameter_gradients',

]
