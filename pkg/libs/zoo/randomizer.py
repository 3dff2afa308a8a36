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
    Model Randomization
    ~~~~~~~~~~~~~~~~~~~

    Top-down re-initialization of parameter groups, cascading or one group
    at a time.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..common.errors import PlanError
from ..tensor import LayerKind, ModelGraph, slot_name, slot_node
from ..utils import new_rng, text_key

from .architectures import he_normal


class RandomizationMode:

    CASCADING = 'cascading'
    SINGLE = 'single'

    ALL = (CASCADING, SINGLE)


class InitPolicy:

    # zero-mean normal with variance 2 / fan_in, biases reset to 0
    HE_NORMAL = 'he-normal'


@dataclass(frozen=True)
class RandomizationPlan:
    """ parameter slot groups, ordered top-down (group 0 is nearest the logits) """

    groups: Tuple[Tuple[str, ...], ...]
    seed: int
    policy: str = InitPolicy.HE_NORMAL

    def __post_init__(self):
        object.__setattr__(self, 'groups', tuple(tuple(group) for group in self.groups))
        if self.policy != InitPolicy.HE_NORMAL:
            raise PlanError('unknown init policy: %s' % self.policy)

    @property
    def stages(self) -> int:
        return len(self.groups)

    def validate(self, model: ModelGraph):
        seen = set()
        known = set(model.slots())
        previous_min = None
        for index, group in enumerate(self.groups):
            for slot in group:
                if slot not in known:
                    raise PlanError('group %d: unknown parameter slot %s' % (index, slot))
                if slot in seen:
                    raise PlanError('group %d: slot %s already in an earlier group' % (index, slot))
                seen.add(slot)
            if len(group) == 0:
                continue
            depths = [model.depth(slot_node(slot)) for slot in group]
            if previous_min is not None and max(depths) > previous_min:
                raise PlanError('group %d is not below the group before it' % index)
            previous_min = min(depths)

    def slots_for(self, stage: int, mode: str = RandomizationMode.CASCADING) -> List[Tuple[int, str]]:
        """ (group index, slot) pairs re-initialized at `stage` """
        if not 0 <= stage < self.stages:
            raise PlanError('stage %d out of range [0, %d)' % (stage, self.stages))
        if mode == RandomizationMode.CASCADING:
            indexes = range(stage + 1)
        elif mode == RandomizationMode.SINGLE:
            indexes = [stage]
        else:
            raise PlanError('unknown randomization mode: %s' % mode)
        return [(index, slot) for index in indexes for slot in self.groups[index]]


def randomize(model: ModelGraph, plan: RandomizationPlan, stage: int,
              mode: str = RandomizationMode.CASCADING) -> ModelGraph:
    """ new model with the groups of `stage` re-initialized; the input model is untouched """
    plan.validate(model=model)
    fresh = {}
    for index, slot in plan.slots_for(stage=stage, mode=mode):
        current = model.param(slot)
        if slot.endswith('.weight'):
            layer = model.node(slot_node(slot)).layer
            # group index in the key: cascading stages share the values of earlier groups
            rng = new_rng(plan.seed, index, text_key(slot))
            fresh[slot] = he_normal(shape=current.shape, fan_in=layer.fan_in, rng=rng)
        else:
            fresh[slot] = np.zeros_like(current)
    if len(fresh) == 0:
        return model
    return model.replace(params=fresh)


#
#   Plans
#

def _node_slots(model: ModelGraph, names: Sequence[str]) -> Tuple[str, ...]:
    slots = []
    for name in names:
        node = model.node(name)
        for param in node.layer.parameter_shapes():
            slots.append(slot_name(node=name, param=param))
    return tuple(slots)


def plan_for_nodes(model: ModelGraph, node_groups: Sequence[Sequence[str]], seed: int) -> RandomizationPlan:
    """ plan from explicit node names, e.g. [['b2_conv2']] for one named layer """
    groups = tuple(_node_slots(model=model, names=names) for names in node_groups)
    plan = RandomizationPlan(groups=groups, seed=seed)
    plan.validate(model=model)
    return plan


def default_plan(model: ModelGraph, seed: int) -> RandomizationPlan:
    """
        {dense head}, then one group per conv block, top-down.
        Models without declared blocks get one group per weighted layer.
    """
    blocks = [list(block) for block in model.arch.get('blocks', [])]
    dense = [node.name for node in model.nodes_of_kind(LayerKind.DENSE)]
    if len(blocks) == 0:
        node_groups = [[name] for name in reversed(dense)]
    else:
        node_groups = [dense] + list(reversed(blocks))
    grouped = set(name for names in node_groups for name in names)
    # weighted layers outside any declared block still get their own group
    for node in reversed(model.nodes_of_kind(LayerKind.CONV2D, LayerKind.BIAS_ONLY)):
        if node.name not in grouped:
            node_groups.append([node.name])
    node_groups.sort(key=lambda names: -max(model.depth(name) for name in names))
    return plan_for_nodes(model=model, node_groups=node_groups, seed=seed)
