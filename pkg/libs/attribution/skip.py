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
    Skip-path Decomposition
    ~~~~~~~~~~~~~~~~~~~~~~~

    At one residual add, relevance routed into the identity branch and into
    the weighted branch is traced separately down to the input.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..common.errors import GraphError, ShapeError
from ..tensor import LayerKind, ModelGraph, INPUT, forward_batch

from .lrp import LrpConfig, logit_seed, propagate
from .maps import AttributionMap, logit_target


@dataclass(frozen=True)
class SkipSplit:
    total: AttributionMap
    skip: AttributionMap
    weighted: AttributionMap
    node: str


def designated_add(model: ModelGraph, node: Optional[str] = None) -> str:
    """ the given ResidualAdd, or the topmost one """
    adds = model.nodes_of_kind(LayerKind.RESIDUAL_ADD)
    if len(adds) == 0:
        raise GraphError('model has no ResidualAdd: %s' % model)
    if node is None:
        node = adds[-1].name
    elif model.node(node).kind != LayerKind.RESIDUAL_ADD:
        raise GraphError('node "%s" is not a ResidualAdd' % node)
    if not model.is_cut(node):
        raise GraphError('ResidualAdd "%s" is bypassed by another path' % node)
    return node


def skip_split(model: ModelGraph, x: np.ndarray, target: int, config: LrpConfig, method: str = 'lrp',
               node: Optional[str] = None) -> SkipSplit:
    """ (total, skip component, weighted component); total == skip + weighted """
    name = designated_add(model=model, node=node)
    x = np.asarray(x, dtype=np.float64)
    if x.shape != model.input_shape:
        raise ShapeError('node "%s" expects shape %s, got %s' % (INPUT, model.input_shape, x.shape))
    acts = forward_batch(model=model, batch=x[np.newaxis])
    seed = logit_seed(model=model, logits=acts[model.output], target=target)
    full = propagate(model=model, acts=acts, seeds={model.output: seed}, config=config, capture=name)
    assert full.captured is not None, 'relevance never reached %s' % name
    r_skip, r_weighted = full.captured
    skip_src, weighted_src = model.node(name).inputs
    skip = propagate(model=model, acts=acts, seeds={skip_src: r_skip}, config=config)
    weighted = propagate(model=model, acts=acts, seeds={weighted_src: r_weighted}, config=config)
    label = logit_target(target)
    return SkipSplit(
        total=AttributionMap(values=full.relevance[0], method=method, target=label, report=full.reports[0]),
        skip=AttributionMap(values=skip.relevance[0], method=method + ':skip', target=label),
        weighted=AttributionMap(values=weighted.relevance[0], method=method + ':weighted', target=label),
        node=name,
    )
