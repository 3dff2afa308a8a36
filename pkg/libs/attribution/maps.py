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
    Attribution Maps
    ~~~~~~~~~~~~~~~~
"""

from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from ..common.errors import ShapeError
from ..tensor import freeze


class ChannelReduction:

    NONE = 'none'
    SUM = 'sum'
    ABS_SUM = 'abs-sum'
    L2 = 'l2'

    ALL = (NONE, SUM, ABS_SUM, L2)


@dataclass(frozen=True)
class AttributionMap:
    """
        values:    relevance per input element (or per element of an intermediate node)
        method:    method id
        target:    'logit:<index>' or 'sum:<node>'
        reduction: channel reduction applied so far
        report:    optional rule-specific audit data (LRP)
    """

    values: np.ndarray
    method: str
    target: str
    reduction: str = ChannelReduction.NONE
    report: Optional[Any] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if not np.all(np.isfinite(values)):
            raise ShapeError('attribution "%s" has non-finite values' % self.method)
        if values.flags.writeable:
            values = freeze(values.copy())
        object.__setattr__(self, 'values', values)

    @property
    def shape(self):
        return self.values.shape

    def total(self) -> float:
        return float(np.sum(self.values))


def logit_target(index: int) -> str:
    return 'logit:%d' % index


def sum_target(node: str) -> str:
    return 'sum:%s' % node


def reduce_channels(amap: AttributionMap, mode: str = ChannelReduction.SUM) -> AttributionMap:
    """ collapse the leading (channel) axis; signed sum is the default """
    if mode not in ChannelReduction.ALL:
        raise ShapeError('unknown channel reduction: %s' % mode)
    if mode == ChannelReduction.NONE:
        return amap
    if amap.reduction != ChannelReduction.NONE:
        raise ShapeError('map already reduced with "%s"' % amap.reduction)
    values = amap.values
    if values.ndim == 0:
        raise ShapeError('cannot reduce channels of a scalar map')
    if mode == ChannelReduction.SUM:
        reduced = np.sum(values, axis=0)
    elif mode == ChannelReduction.ABS_SUM:
        reduced = np.sum(np.abs(values), axis=0)
    else:
        reduced = np.sqrt(np.sum(values * values, axis=0))
    return AttributionMap(values=reduced, method=amap.method, target=amap.target, reduction=mode, report=amap.report)
