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
    Split Evaluation
    ~~~~~~~~~~~~~~~~

    f = g . phi: cut a model at a node into its feature part and its head.
"""

from typing import Tuple

from ..common.errors import GraphError
from ..tensor import LayerSpec, Node, ModelGraph, INPUT, slot_node


def split_at(model: ModelGraph, node_id: str) -> Tuple[ModelGraph, ModelGraph]:
    """ (phi, g) so that forward(g, forward(phi, x)[node_id]) == forward(model, x) bit-exactly """
    if not model.has_node(node_id):
        raise GraphError('node not found: %s' % node_id)
    if not model.is_cut(node_id):
        raise GraphError('node "%s" is not a cut of the graph' % node_id)
    if model.depth(node_id) > model.depth(model.output):
        raise GraphError('node "%s" lies after the output node' % node_id)
    pos = model.depth(node_id)
    bottom = model.nodes[:pos + 1]
    bottom_names = set(node.name for node in bottom)
    phi_params = {slot: value for slot, value in model.params.items() if slot_node(slot) in bottom_names}
    phi = ModelGraph(nodes=bottom, params=phi_params, input_shape=model.input_shape, output=node_id,
                     arch={'kind': 'phi', 'parent': dict(model.arch)})
    # head: a fresh input node stands in for node_id
    top = [Node(name=INPUT, layer=LayerSpec.input())]
    for node in model.nodes[pos + 1:]:
        inputs = tuple(INPUT if src == node_id else src for src in node.inputs)
        top.append(Node(name=node.name, layer=node.layer, inputs=inputs))
    output = INPUT if model.output == node_id else model.output
    g_params = {slot: value for slot, value in model.params.items() if slot_node(slot) not in bottom_names}
    g = ModelGraph(nodes=top, params=g_params, input_shape=model.shape(node_id), output=output,
                   arch={'kind': 'g', 'parent': dict(model.arch)})
    return phi, g
