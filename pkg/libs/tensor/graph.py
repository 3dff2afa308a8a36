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
    Model Graph
    ~~~~~~~~~~~

    Immutable layer DAG: nodes in topological order, named parameter slots
    ('<node>.weight', '<node>.bias'), one input node and one logit node,
    plus an optional split marker separating the feature part from the head.
"""

from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..common.errors import GraphError, ShapeError

from .layers import LayerKind, LayerSpec, Shape
from .tensor import freeze


INPUT = 'input'


@dataclass(frozen=True)
class Node:
    name: str
    layer: LayerSpec
    inputs: Tuple[str, ...] = ()

    @property
    def kind(self) -> str:
        return self.layer.kind


def slot_name(node: str, param: str) -> str:
    return '%s.%s' % (node, param)


def slot_node(slot: str) -> str:
    return slot.rsplit('.', 1)[0]


class ModelGraph:

    def __init__(self, nodes: Sequence[Node], params: Mapping[str, np.ndarray], input_shape: Sequence[int],
                 output: str, split: Optional[str] = None, arch: Optional[Mapping[str, Any]] = None):
        super().__init__()
        self.__nodes: Tuple[Node, ...] = tuple(nodes)
        self.__index: Dict[str, int] = {}
        self.__input_shape: Shape = tuple(int(n) for n in input_shape)
        self.__output = output
        self.__split = split
        self.__arch = dict(arch) if arch is not None else {}
        self.__shapes: Dict[str, Shape] = {}
        self.__consumers: Dict[str, List[str]] = {}
        self.__check_topology()
        self.__check_shapes()
        self.__params = MappingProxyType(self.__check_params(params=params))
        if split is not None and not self.is_cut(split):
            raise GraphError('split marker "%s" is not a cut of the graph' % split)

    def __str__(self) -> str:
        cname = self.__class__.__name__
        arch = self.__arch.get('kind', 'custom')
        return '<%s arch="%s" nodes=%d params=%d output="%s" />' % (cname, arch, len(self.__nodes),
                                                                   self.parameter_count(), self.__output)

    def __repr__(self) -> str:
        return self.__str__()

    #
    #   Validation
    #

    def __check_topology(self):
        nodes = self.__nodes
        if len(nodes) == 0 or nodes[0].name != INPUT or nodes[0].kind != LayerKind.INPUT:
            raise GraphError('first node must be the "%s" node' % INPUT)
        for pos, node in enumerate(nodes):
            if node.name in self.__index:
                raise GraphError('duplicated node name: %s' % node.name)
            if pos > 0 and node.kind == LayerKind.INPUT:
                raise GraphError('only one input node allowed: %s' % node.name)
            for src in node.inputs:
                # inputs must come earlier: this keeps the graph acyclic
                # and every node reachable from the input
                if src not in self.__index:
                    raise GraphError('node "%s" reads "%s" which is not defined before it' % (node.name, src))
                self.__consumers[src].append(node.name)
            self.__index[node.name] = pos
            self.__consumers[node.name] = []
        if self.__output not in self.__index:
            raise GraphError('output node not found: %s' % self.__output)

    def __check_shapes(self):
        for node in self.__nodes:
            if node.kind == LayerKind.INPUT:
                self.__shapes[node.name] = self.__input_shape
                continue
            shapes = [self.__shapes[src] for src in node.inputs]
            self.__shapes[node.name] = node.layer.output_shape(name=node.name, input_shapes=shapes)

    def __check_params(self, params: Mapping[str, np.ndarray]) -> Dict[str, np.ndarray]:
        checked = {}
        expected = set()
        for node in self.__nodes:
            for param, shape in node.layer.parameter_shapes().items():
                slot = slot_name(node=node.name, param=param)
                expected.add(slot)
                value = params.get(slot)
                if value is None:
                    raise ShapeError('missing parameter slot: %s' % slot)
                value = np.asarray(value, dtype=np.float64)
                if value.shape != shape:
                    raise ShapeError('slot "%s" has shape %s, expected %s' % (slot, value.shape, shape))
                if not np.all(np.isfinite(value)):
                    raise ShapeError('slot "%s" contains non-finite values' % slot)
                if value.flags.writeable:
                    value = freeze(value.copy())
                checked[slot] = value
        unknown = set(params.keys()) - expected
        if len(unknown) > 0:
            raise ShapeError('unknown parameter slot(s): %s' % sorted(unknown))
        return checked

    #
    #   Accessors
    #

    @property
    def nodes(self) -> Tuple[Node, ...]:
        return self.__nodes

    @property
    def params(self) -> Mapping[str, np.ndarray]:
        return self.__params

    @property
    def input_shape(self) -> Shape:
        return self.__input_shape

    @property
    def output(self) -> str:
        return self.__output

    @property
    def output_shape(self) -> Shape:
        return self.__shapes[self.__output]

    @property
    def classes(self) -> int:
        size = 1
        for n in self.output_shape:
            size *= n
        return size

    @property
    def split(self) -> Optional[str]:
        return self.__split

    @property
    def arch(self) -> Mapping[str, Any]:
        return MappingProxyType(self.__arch)

    def node(self, name: str) -> Node:
        pos = self.__index.get(name)
        if pos is None:
            raise GraphError('node not found: %s' % name)
        return self.__nodes[pos]

    def has_node(self, name: str) -> bool:
        return name in self.__index

    def depth(self, name: str) -> int:
        """ topological position of a node (input = 0) """
        pos = self.__index.get(name)
        if pos is None:
            raise GraphError('node not found: %s' % name)
        return pos

    def shape(self, name: str) -> Shape:
        self.depth(name=name)
        return self.__shapes[name]

    def consumers(self, name: str) -> List[str]:
        return list(self.__consumers[name])

    def param(self, slot: str) -> np.ndarray:
        value = self.__params.get(slot)
        if value is None:
            raise GraphError('parameter slot not found: %s' % slot)
        return value

    def slots(self) -> List[str]:
        """ parameter slots in node order """
        array = []
        for node in self.__nodes:
            for param in node.layer.parameter_shapes():
                array.append(slot_name(node=node.name, param=param))
        return array

    def parameter_count(self) -> int:
        return sum(int(value.size) for value in self.__params.values())

    def nodes_of_kind(self, *kinds: str) -> List[Node]:
        return [node for node in self.__nodes if node.kind in kinds]

    def is_cut(self, name: str) -> bool:
        """ True when every edge leaving the prefix up to `name` starts at `name` """
        pos = self.depth(name=name)
        for node in self.__nodes[pos + 1:]:
            for src in node.inputs:
                if src != name and self.__index[src] <= pos:
                    return False
        return True

    #
    #   Derived models
    #

    def replace(self, params: Mapping[str, np.ndarray]):
        """ new model with some slots swapped; untouched slots are shared as-is """
        merged = dict(self.__params)
        for slot, value in params.items():
            if slot not in merged:
                raise GraphError('parameter slot not found: %s' % slot)
            merged[slot] = value
        return ModelGraph(nodes=self.__nodes, params=merged, input_shape=self.__input_shape,
                          output=self.__output, split=self.__split, arch=self.__arch)

    def with_split(self, name: Optional[str]):
        return ModelGraph(nodes=self.__nodes, params=self.__params, input_shape=self.__input_shape,
                          output=self.__output, split=name, arch=self.__arch)

    def descriptor(self) -> Dict[str, Any]:
        """ structured description of the architecture (no parameter values) """
        return {
            'arch': dict(self.__arch),
            'input_shape': list(self.__input_shape),
            'output': self.__output,
            'split': self.__split,
            'nodes': [{
                'name': node.name,
                'kind': node.kind,
                'inputs': list(node.inputs),
                'in_features': node.layer.in_features,
                'out_features': node.layer.out_features,
                'kernel': node.layer.kernel,
                'stride': node.layer.stride,
                'padding': node.layer.padding,
            } for node in self.__nodes],
            'slots': [{
                'name': slot,
                'shape': list(self.__params[slot].shape),
            } for slot in self.slots()],
        }

    @classmethod
    def from_descriptor(cls, info: Mapping[str, Any], params: Mapping[str, np.ndarray]):
        nodes = []
        for item in info['nodes']:
            layer = LayerSpec(kind=item['kind'], in_features=item['in_features'],
                              out_features=item['out_features'], kernel=item['kernel'],
                              stride=item['stride'], padding=item['padding'])
            nodes.append(Node(name=item['name'], layer=layer, inputs=tuple(item['inputs'])))
        return cls(nodes=nodes, params=params, input_shape=info['input_shape'], output=info['output'],
                   split=info.get('split'), arch=info.get('arch'))
